"""The partition function by operator contraction and by determinant."""

import warnings

import numpy as np

from sosre import partition, verify
from sosre.params import rel_diff

cfg = verify.SuiteConfig()

print("N   |Z|            rel diff (det vs brute)")
for n in range(1, 7):
    rng = np.random.default_rng(300 + n)
    p = verify.sample_params(cfg, n, rng)
    det = partition.z_determinant(p)
    brute = partition.z_bruteforce(p)
    print(f"{n}   {abs(det.value):.6e}   {rel_diff(det.value, brute.value):.2e}")

rng = np.random.default_rng(310)
p1 = verify.sample_params(cfg, 1, rng)
closed = partition.z_n1_closed(p1.lambdas[0], p1.xis[0], p1.theta, p1.eta, p1.zeta)
brute = partition.z_bruteforce(p1).value
print("\nN=1 closed form vs brute:", rel_diff(closed, brute))

# beyond the brute-force cap only the determinant runs; log_Z stays usable
# even when |Z| under- or overflows a double
p200 = verify.sample_params(cfg, 200, np.random.default_rng(311))
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    big = partition.z_determinant(p200)
print(f"\nN=200 determinant: {big.elapsed * 1000:.1f} ms, "
      f"log|Z| = {big.log_value.real:.1f}, |Z| = {abs(big.value):.3e}, "
      f"cond hint {big.cond_hint:.1e}")

import cmath

import numpy as np
import pytest

from sosre import verify, weights
from sosre.params import NearSingular

CFG = verify.SuiteConfig()


def draw(n, rng):
    return verify.sample_params(CFG, n, rng)


def test_face_weights_direct_oracle():
    # independent scalar evaluation with cmath, fixed real point plus random
    # complex ones
    rng = np.random.default_rng(101)
    points = [(0.3, 1.1, 0.7)]
    for _ in range(20):
        p = draw(1, rng)
        points.append((p.lambdas[0], p.theta, p.eta))
    for lam, theta, eta in points:
        w = weights.face_weights(lam, theta, eta)
        sh = cmath.sinh
        assert abs(w.a - sh(lam + eta)) < 1e-14
        assert abs(w.b_plus - sh(lam) * sh(theta - eta) / sh(theta)) < 1e-14
        assert abs(w.b_minus - sh(lam) * sh(theta + eta) / sh(theta)) < 1e-14
        assert abs(w.c_plus - sh(eta) * sh(theta - lam) / sh(theta)) < 1e-14
        assert abs(w.c_minus - sh(eta) * sh(theta + lam) / sh(theta)) < 1e-14


def test_face_weights_lambda_zero():
    w = weights.face_weights(0.0, 1.1, 0.7)
    assert w.b_plus == 0.0 and w.b_minus == 0.0
    assert abs(w.a - np.sinh(0.7)) < 1e-15
    assert abs(w.c_plus - np.sinh(0.7)) < 1e-15


def test_face_weights_lambda_equals_theta():
    w = weights.face_weights(1.1, 1.1, 0.7)
    assert w.c_plus == 0.0


def test_face_weights_theta_reflection_same_code_path():
    rng = np.random.default_rng(7)
    for _ in range(10):
        p = draw(1, rng)
        lam, theta, eta = p.lambdas[0], p.theta, p.eta
        w = weights.face_weights(lam, theta, eta)
        wref = weights.face_weights(lam, -theta, eta)
        assert w.b_minus == wref.b_plus
        assert w.c_minus == wref.c_plus


def test_face_weights_guard():
    with pytest.raises(NearSingular, match="theta"):
        weights.face_weights(0.3, 1e-9, 0.7)


def test_r_matrix_layout():
    w = weights.face_weights(0.3, 1.1, 0.7)
    R = weights.r_matrix(0.3, 1.1, 0.7)
    assert R[0, 0] == w.a and R[3, 3] == w.a
    assert R[1, 1] == w.b_plus and R[2, 2] == w.b_minus
    assert R[1, 2] == w.c_plus and R[2, 1] == w.c_minus


def test_r_matrix_zero_spectral_is_permutation():
    R = weights.r_matrix(0.0, 1.1, 0.7)
    assert np.allclose(R, np.sinh(0.7) * weights.SWAP_4, rtol=1e-14, atol=0)


def test_ice_rule_structural():
    rng = np.random.default_rng(3)
    for _ in range(10):
        p = draw(1, rng)
        R = weights.r_matrix(p.lambdas[0], p.theta, p.eta)
        # the ten non-conserving entries are never written at all
        conserved = {(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (3, 3)}
        for r in range(4):
            for c in range(4):
                if (r, c) not in conserved:
                    assert R[r, c] == 0.0
        assert weights.ice_rule_residual(p.lambdas[0], p.theta, p.eta) == 0.0
        assert weights.transposed_ice_rule_residual(p.lambdas[0], p.theta, p.eta) == 0.0


def test_k_matrix_values():
    rng = np.random.default_rng(4)
    p = draw(1, rng)
    lam, theta, zeta = p.lambdas[0], p.theta, p.zeta
    K = weights.k_matrix(lam, theta, zeta)
    sh = np.sinh
    assert K[0, 1] == 0.0 and K[1, 0] == 0.0
    assert abs(K[0, 0] - sh(theta + zeta - lam) / sh(theta + zeta + lam)) < 1e-15
    assert abs(K[1, 1] - sh(zeta - lam) / sh(zeta + lam)) < 1e-15


def test_k_matrix_special_points():
    theta, zeta = 0.9, 1.1
    assert np.allclose(weights.k_matrix(0.0, theta, zeta), np.eye(2), rtol=1e-14, atol=0)
    assert weights.k_matrix(zeta, theta, zeta)[1, 1] == 0.0
    assert weights.k_matrix(theta + zeta, theta, zeta)[0, 0] == 0.0


def test_k_matrix_guard_names_denominator():
    with pytest.raises(NearSingular, match=r"zeta\+lambda"):
        weights.k_matrix(-1.1 + 1e-9, 0.9, 1.1)
    with pytest.raises(NearSingular, match=r"theta\+zeta\+lambda"):
        weights.k_matrix(-2.0 + 1e-9, 0.9, 1.1)


def test_dybe_random():
    rng = np.random.default_rng(11)
    for _ in range(100):
        p = draw(3, rng)
        rep = weights.check_dybe(p.lambdas, p.theta, p.eta)
        assert rep.name == "dybe" and rep.passed
        assert rep.residual < 1e-10


def test_dybe_degenerate_spectral_points():
    rng = np.random.default_rng(12)
    for _ in range(10):
        p = draw(3, rng)
        lams = (p.lambdas[0], p.lambdas[0], p.lambdas[2])
        assert weights.check_dybe(lams, p.theta, p.eta).residual < 1e-10


def test_dybe_eta_zero():
    # with no height step the equation degenerates but must still balance
    rng = np.random.default_rng(13)
    for _ in range(10):
        p = draw(3, rng)
        assert weights.check_dybe(p.lambdas, p.theta, 0.0).residual < 1e-10


def test_unitarity_random():
    rng = np.random.default_rng(14)
    for _ in range(100):
        p = draw(1, rng)
        rep = weights.check_unitarity(p.lambdas[0], p.theta, p.eta)
        assert rep.passed and rep.residual < 1e-12


def test_unitarity_special_points():
    theta, eta = 1.3 + 0.2j, 0.6 - 0.1j
    assert weights.check_unitarity(0.0, theta, eta).residual < 1e-12
    # at lambda = eta the scalar vanishes, so the product must be ~0
    assert weights.check_unitarity(eta, theta, eta).residual < 1e-12


def test_reflection_equation_random():
    rng = np.random.default_rng(15)
    for _ in range(100):
        p = draw(2, rng)
        rep = weights.check_reflection_equation(
            p.lambdas[0], p.lambdas[1], p.theta, p.eta, p.zeta
        )
        assert rep.passed and rep.residual < 1e-11


def test_reflection_equation_degenerate_points():
    rng = np.random.default_rng(16)
    p = draw(2, rng)
    l1 = p.lambdas[0]
    assert weights.check_reflection_equation(l1, l1, p.theta, p.eta, p.zeta).residual < 1e-11
    # K(0) is the identity
    assert weights.check_reflection_equation(l1, 0.0, p.theta, p.eta, p.zeta).residual < 1e-11


def test_check_report_passed_iff_within_tol():
    rng = np.random.default_rng(17)
    p = draw(1, rng)
    rep = weights.check_unitarity(p.lambdas[0], p.theta, p.eta, tol=0.0)
    assert rep.residual > 0.0 and not rep.passed
    rep2 = weights.check_unitarity(p.lambdas[0], p.theta, p.eta, tol=1.0)
    assert rep2.passed == (rep2.residual <= rep2.tol)

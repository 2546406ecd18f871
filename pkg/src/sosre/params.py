"""Parameter container, genericity guards, and shared error types.

Every quantity in the model is a ratio of hyperbolic sines, so the only way
an evaluation can go wrong is a sinh in a denominator getting too close to
zero.  This module owns the list of arguments that can appear in those
denominators and provides the guard checks everything else relies on.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

DEFAULT_GUARD_TOL = 1e-6
GUARD_ENV_VAR = "SOS_GUARD_TOL"

# Smallest magnitude admitted in relative-difference denominators, so that
# rel_diff(0, 0) == 0 instead of raising.
REL_FLOOR = 1e-300


class SosError(Exception):
    """Base class for everything raised on purpose by this package."""


class InvariantViolation(SosError):
    """A parameter set breaks a structural or genericity requirement."""


class NearSingular(SosError):
    """A single evaluation would divide by a sinh below the guard tolerance."""


class CapExceeded(SosError):
    """A brute-force contraction was requested beyond the allowed chain size."""


class ParseError(SosError):
    """A config file or CLI value could not be interpreted."""


class SamplingExhausted(SosError):
    """Rejection sampling failed to find a generic point in the allotted tries."""


class IllConditionedWarning(UserWarning):
    """The determinant evaluation hit a pivot small enough to distrust."""


def guard_tol_default():
    """Guard tolerance from the environment, or the built-in default."""
    raw = os.environ.get(GUARD_ENV_VAR)
    if raw is None:
        return DEFAULT_GUARD_TOL
    try:
        val = float(raw)
    except ValueError:
        raise ParseError(f"{GUARD_ENV_VAR} must be a float, got {raw!r}") from None
    if not np.isfinite(val) or val <= 0:
        raise ParseError(f"{GUARD_ENV_VAR} must be finite and positive, got {raw!r}")
    return val


def rel_diff(a, b):
    """|a - b| scaled by the larger magnitude (floored away from zero)."""
    return abs(a - b) / max(abs(a), abs(b), REL_FLOOR)


def _as_complex_tuple(values, what):
    try:
        out = tuple(complex(v) for v in values)
    except TypeError:
        raise InvariantViolation(f"{what} must be a sequence of numbers") from None
    if not all(np.isfinite(v.real) and np.isfinite(v.imag) for v in out):
        raise InvariantViolation(f"{what} entries must be finite")
    return out


@dataclass(frozen=True)
class ModelParams:
    """One instance of the model: couplings plus spectral and inhomogeneity lists.

    ``lambdas`` and ``xis`` must have the same length N >= 1.  Construction
    checks only structure; genericity (no sinh denominator near zero) is
    checked separately by :func:`validate_params`, because several identities
    are *stated* at non-generic points (e.g. the recursions pin lambda_1 to
    xi_1 exactly).
    """

    eta: complex
    zeta: complex
    theta: complex
    lambdas: tuple
    xis: tuple

    def __post_init__(self):
        for name in ("eta", "zeta", "theta"):
            v = complex(getattr(self, name))
            if not (np.isfinite(v.real) and np.isfinite(v.imag)):
                raise InvariantViolation(f"{name} must be finite")
            object.__setattr__(self, name, v)
        lams = _as_complex_tuple(self.lambdas, "lambdas")
        xis = _as_complex_tuple(self.xis, "xis")
        if len(lams) == 0:
            raise InvariantViolation("need at least one spectral parameter")
        if len(lams) != len(xis):
            raise InvariantViolation(
                f"lambdas and xis must have equal length, got {len(lams)} and {len(xis)}"
            )
        object.__setattr__(self, "lambdas", lams)
        object.__setattr__(self, "xis", xis)

    @property
    def n(self):
        return len(self.lambdas)

    def lambdas_array(self):
        return np.array(self.lambdas, dtype=complex)

    def xis_array(self):
        return np.array(self.xis, dtype=complex)

    def replace_lambda(self, i, value):
        """New instance with lambda_i swapped out."""
        lams = list(self.lambdas)
        lams[i] = complex(value)
        return ModelParams(self.eta, self.zeta, self.theta, tuple(lams), self.xis)

    def drop_site(self, i):
        """New instance with lambda_i and xi_i removed (N decreases by one)."""
        lams = self.lambdas[:i] + self.lambdas[i + 1 :]
        xis = self.xis[:i] + self.xis[i + 1 :]
        return ModelParams(self.eta, self.zeta, self.theta, lams, xis)


def _ratio_families(p):
    """Arguments whose sinh sits under the large coupling-dependent ratios.

    These multiply results through factors like sinh(theta + k eta) in
    denominators with sizeable numerators, so random sampling keeps them
    further from zero than the generic families.
    """
    lam = p.lambdas_array()
    ks = np.arange(-(p.n + 2), p.n + 3)
    return [
        ("theta%+d*eta", p.theta + ks * p.eta, lambda k, ks=ks: f"theta{ks[k]:+d}*eta"),
        ("zeta+lambda", p.zeta + lam, lambda k: f"zeta+lambda[{k}]"),
        ("theta+zeta+lambda", p.theta + p.zeta + lam, lambda k: f"theta+zeta+lambda[{k}]"),
    ]


def _generic_families(p):
    lam = p.lambdas_array()
    xi = p.xis_array()
    n = p.n
    le = lam[:, None]
    xe = xi[None, :]
    fams = [
        ("zeta-lambda", p.zeta - lam, lambda k: f"zeta-lambda[{k}]"),
        ("theta+zeta-lambda", p.theta + p.zeta - lam, lambda k: f"theta+zeta-lambda[{k}]"),
        ("2*lambda", 2.0 * lam, lambda k: f"2*lambda[{k}]"),
        ("lambda-xi", (le - xe).ravel(), lambda k: f"lambda[{k // n}]-xi[{k % n}]"),
        ("lambda+xi", (le + xe).ravel(), lambda k: f"lambda[{k // n}]+xi[{k % n}]"),
        ("lambda-xi+eta", (le - xe + p.eta).ravel(), lambda k: f"lambda[{k // n}]-xi[{k % n}]+eta"),
        ("lambda+xi+eta", (le + xe + p.eta).ravel(), lambda k: f"lambda[{k // n}]+xi[{k % n}]+eta"),
        (
            "lambda+lambda+eta",
            (le + lam[None, :] + p.eta).ravel(),
            lambda k: f"lambda[{k // n}]+lambda[{k % n}]+eta",
        ),
    ]
    if n > 1:
        iu, ju = np.triu_indices(n, 1)
        fams += [
            ("lambda-lambda", lam[iu] - lam[ju], lambda k, a=iu, b=ju: f"lambda[{a[k]}]-lambda[{b[k]}]"),
            ("lambda+lambda", lam[iu] + lam[ju], lambda k, a=iu, b=ju: f"lambda[{a[k]}]+lambda[{b[k]}]"),
            ("xi-xi", xi[iu] - xi[ju], lambda k, a=iu, b=ju: f"xi[{a[k]}]-xi[{b[k]}]"),
            ("xi+xi", xi[iu] + xi[ju], lambda k, a=iu, b=ju: f"xi[{a[k]}]+xi[{b[k]}]"),
        ]
    return fams


def min_guard_margins(p):
    """(generic_min, ratio_min): smallest |sinh| over each family tier.

    Fast path for rejection sampling; no labels are materialised.
    """
    gen = min(np.abs(np.sinh(vals)).min() for _, vals, _ in _generic_families(p))
    rat = min(np.abs(np.sinh(vals)).min() for _, vals, _ in _ratio_families(p))
    return float(gen), float(rat)


def guard_violations(p, guard_tol=None, ratio_guard_tol=None, skip=()):
    """Labels of guard arguments whose |sinh| is at or below tolerance.

    ``ratio_guard_tol`` defaults to ``guard_tol``.  ``skip`` is a collection of
    labels to ignore, for identities stated at deliberate coincidences.
    """
    tol = guard_tol_default() if guard_tol is None else guard_tol
    rtol = tol if ratio_guard_tol is None else ratio_guard_tol
    out = []
    for families, t in ((_generic_families(p), tol), (_ratio_families(p), rtol)):
        for _, vals, describe in families:
            bad = np.nonzero(np.abs(np.sinh(vals)) <= t)[0]
            for k in bad:
                label = describe(int(k))
                if label not in skip:
                    out.append(label)
    return out


def validate_params(p, guard_tol=None, skip=()):
    """Raise InvariantViolation naming every guard argument that fails."""
    bad = guard_violations(p, guard_tol=guard_tol, skip=skip)
    if bad:
        tol = guard_tol_default() if guard_tol is None else guard_tol
        raise InvariantViolation(
            "parameters are non-generic (|sinh| <= "
            f"{tol:g}) at: " + ", ".join(sorted(bad))
        )


def require_nonsingular(label, value, guard_tol=None):
    """Guard a single denominator argument; raise NearSingular naming it."""
    tol = guard_tol_default() if guard_tol is None else guard_tol
    s = complex(np.sinh(complex(value)))
    if abs(s) <= tol:
        raise NearSingular(
            f"denominator sinh({label}) = {s:.3e} has |sinh| <= {tol:g}"
        )


def require_all_nonsingular(label_fn, values, guard_tol=None):
    """Vectorised guard: values is an ndarray, label_fn maps flat index to name."""
    tol = guard_tol_default() if guard_tol is None else guard_tol
    mags = np.abs(np.sinh(np.asarray(values, dtype=complex)))
    if mags.size and mags.min() <= tol:
        k = int(np.argmin(mags.ravel()))
        raise NearSingular(
            f"denominator sinh({label_fn(k)}) has |sinh| = {mags.ravel()[k]:.3e} <= {tol:g}"
        )

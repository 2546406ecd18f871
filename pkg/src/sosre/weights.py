"""Face weights, the dynamical R-matrix, the boundary K-matrix, and direct
numerical checks of the identities that define them.

Basis conventions, fixed once and used everywhere: spin up sorts before spin
down, tensor factors are ordered with the auxiliary space first, and in
multi-site spaces site 1 is the slowest-varying index.  A height (dynamical)
shift ``theta - eta*m`` is always resolved blockwise: ``m`` is the total spin
of the shift set read off each basis state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import require_nonsingular

sh = np.sinh


@dataclass(frozen=True)
class FaceWeightSet:
    """The six nonzero face weights at one (lambda, theta); `a` serves both
    all-up and all-down corners, so five distinct values."""

    a: complex
    b_plus: complex
    b_minus: complex
    c_plus: complex
    c_minus: complex


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one identity check: max-entry residual against a tolerance."""

    name: str
    residual: float
    tol: float
    passed: bool
    seed: int | None
    params: dict


def _report(name, residual, tol, seed, params):
    residual = float(residual)
    tol = float(tol)
    return CheckReport(name, residual, tol, residual <= tol, seed, params)


def _b_weight(lam, theta, eta):
    return sh(lam) * sh(theta - eta) / sh(theta)


def _c_weight(lam, theta, eta):
    return sh(eta) * sh(theta - lam) / sh(theta)


def face_weights(lam, theta, eta, guard_tol=None):
    """Statistical weights at spectral parameter `lam` and height `theta`.

    The minus weights are the plus weights at reflected height, literally the
    same code path, so b_minus(lam, theta) == b_plus(lam, -theta) bit-exactly.
    """
    lam, theta, eta = complex(lam), complex(theta), complex(eta)
    require_nonsingular("theta", theta, guard_tol)
    return FaceWeightSet(
        a=sh(lam + eta),
        b_plus=_b_weight(lam, theta, eta),
        b_minus=_b_weight(lam, -theta, eta),
        c_plus=_c_weight(lam, theta, eta),
        c_minus=_c_weight(lam, -theta, eta),
    )


def r_matrix(lam, theta, eta, guard_tol=None):
    """4x4 R-matrix on aux (x) site in the basis (++, +-, -+, --).

    Rows are outgoing indices, columns incoming.  Only the six conserved-spin
    entries are populated; the other ten stay exactly zero (ice rule).
    """
    w = face_weights(lam, theta, eta, guard_tol)
    R = np.zeros((4, 4), dtype=complex)
    R[0, 0] = w.a
    R[1, 1] = w.b_plus
    R[1, 2] = w.c_plus
    R[2, 1] = w.c_minus
    R[2, 2] = w.b_minus
    R[3, 3] = w.a
    return R


def k_matrix(lam, theta, zeta, guard_tol=None):
    """Diagonal 2x2 boundary matrix; K(0) is the identity."""
    lam, theta, zeta = complex(lam), complex(theta), complex(zeta)
    require_nonsingular("theta+zeta+lambda", theta + zeta + lam, guard_tol)
    require_nonsingular("zeta+lambda", zeta + lam, guard_tol)
    return np.diag(
        [
            sh(theta + zeta - lam) / sh(theta + zeta + lam),
            sh(zeta - lam) / sh(zeta + lam),
        ]
    )


# The 4x4 swap P and the embedding helpers below are the only places that
# touch bit layout; everything chain-shaped in this package is built on them.

SWAP_4 = np.zeros((4, 4))
SWAP_4[0, 0] = SWAP_4[1, 2] = SWAP_4[2, 1] = SWAP_4[3, 3] = 1.0


def spin_of(state, pos, n):
    """Spin (+1 up / -1 down) at tensor position `pos` of an n-fold basis index."""
    return 1 - 2 * ((state >> (n - 1 - pos)) & 1)


def embed_pair(n, pos_a, pos_b, shift, lam, theta, eta, guard_tol=None):
    """R(lam; theta - eta*m) on tensor positions (pos_a, pos_b) of n two-level
    spaces, identity elsewhere.  `m` is the total spin over the positions in
    `shift`, read off each basis column, so the operator is block diagonal in
    the shift-set magnetization.
    """
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    cache = {}
    ba = n - 1 - pos_a
    bb = n - 1 - pos_b
    clear = ~((1 << ba) | (1 << bb))
    for col in range(dim):
        m = 0
        for k in shift:
            m += 1 - 2 * ((col >> (n - 1 - k)) & 1)
        R = cache.get(m)
        if R is None:
            R = cache[m] = r_matrix(lam, theta - eta * m, eta, guard_tol)
        ia = (col >> ba) & 1
        ib = (col >> bb) & 1
        cin = 2 * ia + ib
        base = col & clear
        for ra in (0, 1):
            for rb in (0, 1):
                val = R[2 * ra + rb, cin]
                if val != 0:
                    out[base | (ra << ba) | (rb << bb), col] = val
    return out


def embed_boundary(n, pos, lam, theta, zeta, guard_tol=None):
    """K acting on tensor position `pos`, identity elsewhere (diagonal)."""
    K = k_matrix(lam, theta, zeta, guard_tol)
    b = n - 1 - pos
    bits = (np.arange(1 << n) >> b) & 1
    return np.diag(np.where(bits == 0, K[0, 0], K[1, 1]))


def ice_rule_residual(lam, theta, eta, guard_tol=None):
    """Max |entry| of [R, sz(x)Id + Id(x)sz]; zero structurally."""
    R = r_matrix(lam, theta, eta, guard_tol)
    M = np.diag([2.0, 0.0, 0.0, -2.0])
    return float(np.max(np.abs(R @ M - M @ R)))


def transposed_ice_rule_residual(lam, theta, eta, guard_tol=None):
    """Max |entry| of [R^{t1}, sz(x)Id - Id(x)sz] where t1 is the partial
    transpose in the first space; zero structurally."""
    R = r_matrix(lam, theta, eta, guard_tol)
    Rt1 = R.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)
    M = np.diag([0.0, 2.0, -2.0, 0.0])
    return float(np.max(np.abs(Rt1 @ M - M @ Rt1)))


def check_dybe(lambdas, theta, eta, tol=1e-10, guard_tol=None, seed=None):
    """Dynamical Yang-Baxter equation on three spaces.

    Each R carries a height shifted by the spin of the spectating space on
    one side of the equation and is unshifted on the other.
    """
    l1, l2, l3 = (complex(v) for v in lambdas)
    lhs = (
        embed_pair(3, 0, 1, (2,), l1 - l2, theta, eta, guard_tol)
        @ embed_pair(3, 0, 2, (), l1 - l3, theta, eta, guard_tol)
        @ embed_pair(3, 1, 2, (0,), l2 - l3, theta, eta, guard_tol)
    )
    rhs = (
        embed_pair(3, 1, 2, (), l2 - l3, theta, eta, guard_tol)
        @ embed_pair(3, 0, 2, (1,), l1 - l3, theta, eta, guard_tol)
        @ embed_pair(3, 0, 1, (), l1 - l2, theta, eta, guard_tol)
    )
    res = np.max(np.abs(lhs - rhs))
    return _report(
        "dybe", res, tol, seed,
        {"lambdas": (l1, l2, l3), "theta": complex(theta), "eta": complex(eta)},
    )


def check_unitarity(lam, theta, eta, tol=1e-12, guard_tol=None, seed=None):
    """R12(lam) R21(-lam) must equal -sinh(lam-eta) sinh(lam+eta) times the
    identity, with R21 the swap conjugate of R12."""
    lam, theta, eta = complex(lam), complex(theta), complex(eta)
    R12 = r_matrix(lam, theta, eta, guard_tol)
    R21 = SWAP_4 @ r_matrix(-lam, theta, eta, guard_tol) @ SWAP_4
    res = np.max(np.abs(R12 @ R21 + sh(lam - eta) * sh(lam + eta) * np.eye(4)))
    return _report(
        "unitarity", res, tol, seed, {"lambda": lam, "theta": theta, "eta": eta}
    )


def check_reflection_equation(l1, l2, theta, eta, zeta, tol=1e-11, guard_tol=None, seed=None):
    """Boundary reflection equation on two spaces with K in space 1 or 2."""
    l1, l2 = complex(l1), complex(l2)
    K1 = embed_boundary(2, 0, l1, theta, zeta, guard_tol)
    K2 = embed_boundary(2, 1, l2, theta, zeta, guard_tol)
    R12 = lambda x: embed_pair(2, 0, 1, (), x, theta, eta, guard_tol)
    R21 = lambda x: embed_pair(2, 1, 0, (), x, theta, eta, guard_tol)
    lhs = R12(l1 - l2) @ K1 @ R21(l1 + l2) @ K2
    rhs = K2 @ R12(l1 + l2) @ K1 @ R21(l1 - l2)
    res = np.max(np.abs(lhs - rhs))
    return _report(
        "reflection_equation", res, tol, seed,
        {"l1": l1, "l2": l2, "theta": complex(theta), "eta": complex(eta), "zeta": complex(zeta)},
    )

"""Monodromy operators on the open chain and their algebra checks.

Operators live on aux (x) chain with the auxiliary space as the slowest
tensor factor; chain site i sits at tensor position i.  Products follow
print order: the leftmost factor is applied last.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import weights
from .params import require_nonsingular

sh = np.sinh

AUX_FIRST = "aux-first"
AUX_SECOND = "aux-second"


def _popcounts(dim):
    # bitwise_count yields uint8; widen before any signed arithmetic
    return np.bitwise_count(np.arange(dim)).astype(np.int64)


@dataclass(frozen=True)
class ChainSpace:
    """Indexing helper for the 2^N chain basis.

    Spin up sorts before spin down and site 1 is the slowest index, so the
    all-up state is index 0 and the all-down state is index 2^N - 1.
    """

    n_sites: int

    @property
    def dim(self):
        return 1 << self.n_sites

    @property
    def all_up(self):
        return 0

    @property
    def all_down(self):
        return self.dim - 1

    def spin(self, state, site):
        """Spin (+1/-1) at 1-based `site` of basis index `state`."""
        return weights.spin_of(state, site - 1, self.n_sites)

    def magnetization(self, state):
        """Total spin of basis index `state`."""
        return self.n_sites - 2 * int(state).bit_count()

    def magnetizations(self):
        """Magnetization of every basis index, as an array."""
        return self.n_sites - 2 * _popcounts(self.dim)


@dataclass(frozen=True)
class MonodromyBlocks:
    """Auxiliary-space blocks of an aux (x) chain operator: rows/cols of the
    aux index ordered (up, down) give A = (up,up), B = (up,down),
    C = (down,up), D = (down,down)."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray


def _split_blocks(full):
    h = full.shape[0] // 2
    return MonodromyBlocks(
        A=full[:h, :h], B=full[:h, h:], C=full[h:, :h], D=full[h:, h:]
    )


def embed_site_r(i, x, theta, eta, side=AUX_FIRST, n=None, guard_tol=None):
    """R(x; theta - eta*m) coupling the auxiliary space with chain site i
    (1-based) inside the full aux (x) chain space of dimension 2^(n+1).

    The height shift m is the total spin of the sites to the right of i
    (j > i), read off each basis state.  With side AUX_FIRST the auxiliary
    space is the first R leg; AUX_SECOND swaps the legs.
    """
    if n is None:
        raise ValueError("chain length n is required")
    if not 1 <= i <= n:
        raise ValueError(f"site index {i} outside 1..{n}")
    shift = tuple(range(i + 1, n + 1))
    if side == AUX_FIRST:
        pa, pb = 0, i
    elif side == AUX_SECOND:
        pa, pb = i, 0
    else:
        raise ValueError(f"side must be {AUX_FIRST!r} or {AUX_SECOND!r}")
    return weights.embed_pair(n + 1, pa, pb, shift, x, theta, eta, guard_tol)


def _bulk_full_at(n, aux, sites, extra_shift, lam, xis, theta, eta, guard_tol=None):
    """Bulk monodromy carrier: aux couples to each site left to right, the
    factor for sites[k] shifted by the spins of the later sites plus
    `extra_shift` positions."""
    T = np.eye(1 << n, dtype=complex)
    for k, site in enumerate(sites):
        shift = tuple(sites[k + 1 :]) + tuple(extra_shift)
        T = T @ weights.embed_pair(n, aux, site, shift, lam - xis[k], theta, eta, guard_tol)
    return T


def _hat_full_at(n, aux, sites, extra_shift, lam, xis, theta, eta, guard_tol=None):
    """Return-path monodromy carrier: leg order swapped, reversed site order,
    spectral arguments lam + xi_k, same shift rule."""
    T = np.eye(1 << n, dtype=complex)
    for k in range(len(sites) - 1, -1, -1):
        shift = tuple(sites[k + 1 :]) + tuple(extra_shift)
        T = T @ weights.embed_pair(n, sites[k], aux, shift, lam + xis[k], theta, eta, guard_tol)
    return T


def bulk_full(lam, p, guard_tol=None):
    """Bulk monodromy as the full 2^(N+1) aux (x) chain operator."""
    return _bulk_full_at(
        p.n + 1, 0, range(1, p.n + 1), (), lam, p.xis, p.theta, p.eta, guard_tol
    )


def bulk_monodromy(lam, p, guard_tol=None):
    """Auxiliary-space blocks A, B, C, D of the bulk monodromy."""
    return _split_blocks(bulk_full(lam, p, guard_tol))


def hat_monodromy(lam, p, guard_tol=None):
    """Return-path monodromy as the full aux (x) chain operator."""
    return _hat_full_at(
        p.n + 1, 0, range(1, p.n + 1), (), lam, p.xis, p.theta, p.eta, guard_tol
    )


def double_row_full(lam, p, guard_tol=None):
    """Double-row monodromy: bulk, boundary K on the auxiliary space, return path."""
    K = weights.embed_boundary(p.n + 1, 0, lam, p.theta, p.zeta, guard_tol)
    return bulk_full(lam, p, guard_tol) @ K @ hat_monodromy(lam, p, guard_tol)


def double_row(lam, p, guard_tol=None):
    """Auxiliary-space blocks of the double-row monodromy."""
    return _split_blocks(double_row_full(lam, p, guard_tol))


def b_operator(lam, p, guard_tol=None):
    """The creation-like block of the double-row monodromy (lowers chain
    magnetization by 2)."""
    return double_row(lam, p, guard_tol).B


def gamma_hat(lam, p):
    """Scalar in the inverse identity: hat(T)(lam) T(-lam) = gamma_hat * Id."""
    lam = complex(lam)
    val = (-1.0 + 0.0j) ** p.n
    for x in p.xis:
        val = val * sh(lam + x - p.eta) * sh(lam + x + p.eta)
    return complex(val)


def crossing_scalar(lam, theta, eta, zeta, guard_tol=None):
    """Proportionality factor relating the B operator at -lam-eta to the one
    at lam.  The overall sign is -1 for every chain length."""
    lam, theta, eta, zeta = complex(lam), complex(theta), complex(eta), complex(zeta)
    require_nonsingular("2*lambda", 2 * lam, guard_tol)
    require_nonsingular("lambda-zeta+eta", lam - zeta + eta, guard_tol)
    require_nonsingular("lambda-theta-zeta+eta", lam - theta - zeta + eta, guard_tol)
    return -(
        sh(2 * (lam + eta)) * sh(lam + zeta) * sh(lam + zeta + theta)
    ) / (sh(2 * lam) * sh(lam - zeta + eta) * sh(lam - theta - zeta + eta))


def grading_residual(op):
    """Max |entry| violating total-magnetization conservation; zero structurally."""
    dim = op.shape[0]
    n = dim.bit_length() - 1
    mags = n - 2 * _popcounts(dim)
    mask = mags[:, None] != mags[None, :]
    return float(np.max(np.abs(np.where(mask, op, 0.0))))


def block_grading_residual(block, delta):
    """Max |entry| of an aux block outside chain-magnetization change `delta`
    (row magnetization minus column magnetization); zero structurally."""
    dim = block.shape[0]
    n = dim.bit_length() - 1
    mags = n - 2 * _popcounts(dim)
    mask = mags[:, None] != mags[None, :] + delta
    return float(np.max(np.abs(np.where(mask, block, 0.0))))


def _params_dict(p, **extra):
    d = {"eta": p.eta, "zeta": p.zeta, "theta": p.theta,
         "lambdas": p.lambdas, "xis": p.xis}
    d.update(extra)
    return d


def check_exchange_algebra(l1, l2, p, tol=1e-9, guard_tol=None, seed=None):
    """Exchange relation of two bulk monodromies on a two-auxiliary carrier.

    On the left the second monodromy is height-shifted by the first auxiliary
    spin; on the right the roles swap, and the intertwining R carries the
    total chain spin on the left only.
    """
    l1, l2 = complex(l1), complex(l2)
    n = p.n + 2
    sites = tuple(range(2, p.n + 2))
    T1 = lambda lam, extra: _bulk_full_at(n, 0, sites, extra, lam, p.xis, p.theta, p.eta, guard_tol)
    T2 = lambda lam, extra: _bulk_full_at(n, 1, sites, extra, lam, p.xis, p.theta, p.eta, guard_tol)
    lhs = weights.embed_pair(n, 0, 1, sites, l1 - l2, p.theta, p.eta, guard_tol) @ T1(l1, ()) @ T2(l2, (0,))
    rhs = T2(l2, ()) @ T1(l1, (1,)) @ weights.embed_pair(n, 0, 1, (), l1 - l2, p.theta, p.eta, guard_tol)
    res = np.max(np.abs(lhs - rhs))
    return weights._report("exchange_algebra", res, tol, seed, _params_dict(p, l1=l1, l2=l2))


def check_double_row_reflection(l1, l2, p, tol=1e-9, guard_tol=None, seed=None):
    """Reflection equation for two double-row monodromies on a two-auxiliary
    carrier; all four intertwining R factors carry the total chain spin."""
    l1, l2 = complex(l1), complex(l2)
    n = p.n + 2
    sites = tuple(range(2, p.n + 2))

    def dr(aux, lam):
        K = weights.embed_boundary(n, aux, lam, p.theta, p.zeta, guard_tol)
        return (
            _bulk_full_at(n, aux, sites, (), lam, p.xis, p.theta, p.eta, guard_tol)
            @ K
            @ _hat_full_at(n, aux, sites, (), lam, p.xis, p.theta, p.eta, guard_tol)
        )

    R12 = lambda x: weights.embed_pair(n, 0, 1, sites, x, p.theta, p.eta, guard_tol)
    R21 = lambda x: weights.embed_pair(n, 1, 0, sites, x, p.theta, p.eta, guard_tol)
    D1, D2 = dr(0, l1), dr(1, l2)
    lhs = R12(l1 - l2) @ D1 @ R21(l1 + l2) @ D2
    rhs = D2 @ R12(l1 + l2) @ D1 @ R21(l1 - l2)
    res = np.max(np.abs(lhs - rhs))
    return weights._report("double_row_reflection", res, tol, seed, _params_dict(p, l1=l1, l2=l2))


def check_b_commutation(l1, l2, p, tol=1e-10, guard_tol=None, seed=None):
    """B operators at different spectral parameters commute."""
    B1 = b_operator(l1, p, guard_tol)
    B2 = b_operator(l2, p, guard_tol)
    res = np.max(np.abs(B1 @ B2 - B2 @ B1))
    return weights._report("b_commutation", res, tol, seed, _params_dict(p, l1=complex(l1), l2=complex(l2)))


def check_monodromy_inverse(lam, p, tol=1e-10, guard_tol=None, seed=None):
    """hat(T)(lam) T(-lam) is gamma_hat(lam) times the identity."""
    lam = complex(lam)
    Th = hat_monodromy(lam, p, guard_tol)
    T = bulk_full(-lam, p, guard_tol)
    res = np.max(np.abs(Th @ T - gamma_hat(lam, p) * np.eye(Th.shape[0])))
    return weights._report("monodromy_inverse", res, tol, seed, _params_dict(p, l=lam))


def check_b_crossing(lam, p, tol=1e-9, guard_tol=None, seed=None):
    """B(-lam-eta) equals crossing_scalar(lam) times B(lam)."""
    lam = complex(lam)
    factor = crossing_scalar(lam, p.theta, p.eta, p.zeta, guard_tol)
    Bc = b_operator(-lam - p.eta, p, guard_tol)
    B = b_operator(lam, p, guard_tol)
    res = np.max(np.abs(Bc - factor * B))
    return weights._report("b_crossing", res, tol, seed, _params_dict(p, l=lam))

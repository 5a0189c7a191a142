"""Momentum-space Thomas-Fermi functional for spherically symmetric densities.

    E_mTF(tau) = int xi^2 tau - 3/2 gamma^(-1/2) Z int tau^(2/3)
                 + 3/4 gamma^(-1/2) iint [tau_< tau_>^(2/3) - tau_<^(5/3) / 5]

The repulsion has two independent evaluations: the pairwise double sum over
cells (``repulsion_m_direct``) and the layer-cake form in the substituted
variable ``sigma = tau^(2/3)`` (``repulsion_m_layercake``),

    R_m = C int_0^inf P(t)^2 dt,   P(t) = int [sigma(xi) - t^2]_+ dxi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .position import EnergyBreakdown
from .radial import (
    AtomConfig,
    DomainError,
    RadialGrid,
    RadialProfile,
    Space,
    integrate_radial,
    require_domain,
)

# C = LAYERCAKE_CONSTANT * gamma^(-1/2); fixed by matching the pairwise sum on
# the unit ball (see tests/test_momentum.py::test_layercake_constant_oracle).
LAYERCAKE_CONSTANT = 9.0 / 8.0

_GL3_X, _GL3_W = np.polynomial.legendre.leggauss(3)


@dataclass(frozen=True)
class PairwiseExtremes:
    tau_min: np.ndarray
    tau_max: np.ndarray


def pairwise_extremes(a: np.ndarray, b: np.ndarray | None = None) -> PairwiseExtremes:
    """Outer min/max of two value arrays (``b`` defaults to ``a``)."""
    a = np.asarray(a, dtype=float)
    b = a if b is None else np.asarray(b, dtype=float)
    return PairwiseExtremes(np.minimum.outer(a, b), np.maximum.outer(a, b))


@dataclass(frozen=True, eq=False)
class SubstitutedProfile:
    """The convexifying variable ``sigma = tau^(2/3)`` on a momentum grid."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.nodes.shape:
            raise ValueError("values do not match the grid")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_profile(cls, tau: RadialProfile) -> "SubstitutedProfile":
        if tau.space is not Space.MOMENTUM:
            raise DomainError("substitution applies to momentum-space profiles")
        return cls(tau.grid, np.cbrt(tau.values) ** 2)

    def to_profile(self) -> RadialProfile:
        return RadialProfile(self.grid, np.clip(self.values, 0.0, None) ** 1.5, Space.MOMENTUM)


def kinetic_m(tau: RadialProfile) -> float:
    require_domain(tau, Space.MOMENTUM)
    return integrate_radial(tau, 2)


def attraction_m(tau: RadialProfile, cfg: AtomConfig) -> float:
    require_domain(tau, Space.MOMENTUM)
    sigma = np.cbrt(tau.values) ** 2
    return 1.5 * cfg.Z / math.sqrt(cfg.gamma) * integrate_radial(tau.with_values(sigma), 0)


def _pair_kernel(ext: PairwiseExtremes, ext23: PairwiseExtremes) -> np.ndarray:
    # tau -> tau^(2/3) is monotone, so the extremes of sigma pair up with tau's
    return ext.tau_min * ext23.tau_max - 0.2 * ext.tau_min * ext23.tau_min


def repulsion_m_direct(tau: RadialProfile, cfg: AtomConfig, block: int = 512) -> float:
    """Pairwise double sum over cells, O(n^2), evaluated in row blocks."""
    require_domain(tau, Space.MOMENTUM)
    v = tau.values
    v23 = np.cbrt(v) ** 2
    vol = tau.grid.volumes
    partial = []
    for start in range(0, v.size, block):
        sl = slice(start, start + block)
        kern = _pair_kernel(pairwise_extremes(v[sl], v), pairwise_extremes(v23[sl], v23))
        partial.append(float(vol[sl] @ (kern @ vol)))
    return 0.75 / math.sqrt(cfg.gamma) * math.fsum(partial)


def _layercake(sigma: np.ndarray, vol: np.ndarray) -> tuple[float, np.ndarray]:
    """Exact ``int_0^inf P(t)^2 dt`` and, per cell, ``int_0^sqrt(sigma_i) P(t) dt``.

    Between consecutive distinct levels ``L_(k-1) < t <= L_k`` the active set
    is fixed, so ``P(t) = P(L_k) + S_k (L_k^2 - t^2)`` with ``S_k`` the active
    volume.  Quartic integrands are integrated with 3-point Gauss-Legendre.
    """
    t = np.sqrt(np.clip(sigma, 0.0, None))
    levels, inverse = np.unique(t, return_inverse=True)
    pos = levels > 0
    if not np.any(pos):
        return 0.0, np.zeros_like(t)
    level_vol = np.bincount(inverse, weights=vol, minlength=levels.size)
    # active volume on the segment ending at each level
    active = np.cumsum(level_vol[::-1])[::-1]
    lo = np.concatenate(([0.0], levels[:-1]))
    width = levels - lo
    drop = active * width * (levels + lo)  # S_k (L_k^2 - L_(k-1)^2)
    # P at each level, summed down from the top where P = 0
    p_top = np.concatenate((np.cumsum(drop[::-1])[::-1][1:], [0.0]))

    half = 0.5 * width[:, None]
    tq = lo[:, None] + half * (_GL3_X[None, :] + 1.0)
    pq = p_top[:, None] + active[:, None] * (levels[:, None] - tq) * (levels[:, None] + tq)
    seg_sq = (half[:, 0]) * ((pq**2) @ _GL3_W)
    seg_lin = p_top * width + active * width**2 * (2.0 * levels + lo) / 3.0
    seg_sq[~pos] = 0.0
    seg_lin[~pos] = 0.0
    cum_lin = np.cumsum(seg_lin)
    return math.fsum(seg_sq), cum_lin[inverse]


def repulsion_m_layercake(tau: RadialProfile, cfg: AtomConfig) -> float:
    require_domain(tau, Space.MOMENTUM)
    sigma = np.cbrt(tau.values) ** 2
    integral, _ = _layercake(sigma, tau.grid.volumes)
    return LAYERCAKE_CONSTANT / math.sqrt(cfg.gamma) * integral


def energy_mtf(tau: RadialProfile, cfg: AtomConfig, repulsion: str = "direct") -> EnergyBreakdown:
    if repulsion == "direct":
        rep = repulsion_m_direct(tau, cfg)
    elif repulsion == "layercake":
        rep = repulsion_m_layercake(tau, cfg)
    else:
        raise ValueError(f"unknown repulsion path {repulsion!r}")
    return EnergyBreakdown(kinetic=kinetic_m(tau), attraction=attraction_m(tau, cfg), repulsion=rep)


def energy_s(sigma: SubstitutedProfile, cfg: AtomConfig, repulsion: str = "direct") -> float:
    """``E_mTF(sigma^(3/2))``, the functional that is strictly convex in ``sigma``."""
    if np.any(sigma.values < 0) or not np.all(np.isfinite(sigma.values)):
        raise DomainError("substituted profile must be finite and nonnegative")
    return energy_mtf(sigma.to_profile(), cfg, repulsion).total


def energy_s_gradient(sigma: np.ndarray, grid: RadialGrid, cfg: AtomConfig) -> tuple[float, np.ndarray]:
    """Total ``E_s`` and its gradient with respect to the cell values of ``sigma``.

    Uses the layer-cake repulsion, which costs O(n log n).
    """
    sigma = np.clip(np.asarray(sigma, dtype=float), 0.0, None)
    vol = grid.volumes
    k2 = grid.moment(2)
    root = np.sqrt(sigma)
    c_att = 1.5 * cfg.Z / math.sqrt(cfg.gamma)
    c_rep = LAYERCAKE_CONSTANT / math.sqrt(cfg.gamma)
    rep, cum_p = _layercake(sigma, vol)
    total = math.fsum(k2 * sigma * root) - c_att * math.fsum(vol * sigma) + c_rep * rep
    grad = 1.5 * k2 * root - c_att * vol + 2.0 * c_rep * vol * cum_p
    return total, grad

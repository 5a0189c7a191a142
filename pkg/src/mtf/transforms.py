"""Level-set maps between position and momentum densities.

``transform_T`` sends a decreasing position density ``rho`` to the momentum
density ``tau(xi) = gamma^(-3/2) r(|xi|)^3`` built from its Fermi radius

    r(s) = sup{ |y| : gamma^(1/2) rho(y)^(1/3) >= s },

and ``transform_S`` sends a decreasing ``tau`` to

    rho(x) = q / (2 pi)^3 * |{ xi : |x| < gamma^(1/2) tau(xi)^(1/3) }|.

For step profiles both maps swap the roles of "level" and "radius": the
output cell edges are the distinct input levels and the output values are
the cubed input cell edges.  Both are therefore exact and mass preserving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .radial import (
    MIN_NODES,
    AtomConfig,
    DomainError,
    RadialGrid,
    RadialProfile,
    Space,
    l1_distance,
    mass,
)

_DECREASING_MSG = "profile must be decreasing; rearrange first"


def _require_decreasing(p: RadialProfile) -> None:
    if np.any(p.values < 0) or not np.all(np.isfinite(p.values)):
        raise DomainError("profile must be finite and nonnegative")
    if not p.is_nonincreasing():
        raise DomainError(_DECREASING_MSG)


def _level_table(p: RadialProfile, cfg: AtomConfig) -> tuple[np.ndarray, np.ndarray]:
    """Distinct positive levels ``gamma^(1/2) f^(1/3)`` (ascending) and, for each,
    the outer edge of the last cell that reaches it."""
    v = p.values
    positive = v > 0
    if not np.any(positive):
        return np.empty(0), np.empty(0)
    level = math.sqrt(cfg.gamma) * np.cbrt(v[positive])
    edge = p.grid.nodes[positive]
    # v is nonincreasing, so the last occurrence of a level carries the sup
    rev_levels, rev_first = np.unique(level[::-1], return_index=True)
    radii = edge[::-1][rev_first]
    return rev_levels, radii


@dataclass(frozen=True)
class FermiRadiusCurve:
    """The nonincreasing, right-continuous map ``s -> r(s)`` of a decreasing density."""

    source: RadialProfile
    levels: np.ndarray
    radii: np.ndarray

    @property
    def support_radius(self) -> float:
        """``r(0+)``: outer edge of the last cell where the density is positive."""
        return float(self.radii[0]) if self.radii.size else 0.0

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.levels, s, side="left")
        padded = np.concatenate((self.radii, [0.0]))
        out = padded[np.minimum(idx, self.radii.size)]
        return float(out) if out.ndim == 0 else out

    def strict(self, a):
        """``sup{|y| : level(y) > a}``; differs from ``r(a)`` only at the levels themselves."""
        a = np.asarray(a, dtype=float)
        idx = np.searchsorted(self.levels, a, side="right")
        padded = np.concatenate((self.radii, [0.0]))
        out = padded[np.minimum(idx, self.radii.size)]
        return float(out) if out.ndim == 0 else out


def fermi_radius_curve(rho: RadialProfile, cfg: AtomConfig) -> FermiRadiusCurve:
    _require_decreasing(rho)
    levels, radii = _level_table(rho, cfg)
    return FermiRadiusCurve(rho, levels, radii)


def fermi_radius(rho: RadialProfile, cfg: AtomConfig, s):
    """``r(s)``; the supremum of an empty set is 0 and ``s = 0`` gives ``r(0+)``."""
    if np.any(np.asarray(s) < 0):
        raise ValueError("s must be nonnegative")
    return fermi_radius_curve(rho, cfg)(s)


def _natural_grid(levels: np.ndarray) -> RadialGrid:
    # pad with zero-valued cells past the top level so the image has a
    # vanishing tail and at least MIN_NODES nodes
    top = levels[-1]
    extra = max(1, MIN_NODES - levels.size)
    tail = top * np.geomspace(2.0 ** (1.0 / extra), 2.0, extra)
    return RadialGrid(np.concatenate((levels, tail)), "custom")


def _swap(p: RadialProfile, cfg: AtomConfig, prefactor: float, strict: bool,
          out_space: Space, grid: RadialGrid | None) -> RadialProfile:
    curve = fermi_radius_curve(p, cfg)
    if grid is None:
        if curve.levels.size == 0:
            return RadialProfile(p.grid, np.zeros(p.grid.n), out_space)
        grid = _natural_grid(curve.levels)
        # cell interiors; the two conventions only differ on the edges
        where = 0.5 * (grid.edges[:-1] + grid.edges[1:])
    else:
        where = grid.nodes
    radius = curve.strict(where) if strict else curve(where)
    values = prefactor * np.asarray(radius) ** 3
    return RadialProfile(grid, values, out_space)


def transform_T(rho: RadialProfile, cfg: AtomConfig, grid: RadialGrid | None = None) -> RadialProfile:
    """Position density to momentum density, ``tau(xi) = gamma^(-3/2) r(|xi|)^3``.

    Without ``grid`` the output cells are bounded by the distinct levels of
    ``rho`` and the map is exact; with ``grid`` the formula is evaluated at
    its nodes.
    """
    if rho.space is not Space.POSITION:
        raise DomainError("transform_T expects a position-space profile")
    return _swap(rho, cfg, cfg.gamma**-1.5, False, Space.MOMENTUM, grid)


def transform_S(tau: RadialProfile, cfg: AtomConfig, grid: RadialGrid | None = None) -> RadialProfile:
    """Momentum density to position density.

    ``rho(x) = q / (2 pi)^3 * 4 pi / 3 * xi_F(|x|)^3`` with
    ``xi_F(a) = sup{|xi| : gamma^(1/2) tau(xi)^(1/3) > a}``.
    """
    if tau.space is not Space.MOMENTUM:
        raise DomainError("transform_S expects a momentum-space profile")
    prefactor = cfg.q / (2.0 * math.pi) ** 3 * (4.0 * math.pi / 3.0)
    return _swap(tau, cfg, prefactor, True, Space.POSITION, grid)


def round_trip_residual(p: RadialProfile, cfg: AtomConfig) -> float:
    """Relative L1 distance between ``p`` and ``S(T(p))`` (or ``T(S(p))``)."""
    if p.space is Space.POSITION:
        back = transform_S(transform_T(p, cfg), cfg)
    else:
        back = transform_T(transform_S(p, cfg), cfg)
    m = mass(p)
    if m == 0:
        return l1_distance(p, back)
    return l1_distance(p, back) / m

"""Radial grids, step-function profiles and the quadrature shared by both functionals.

A :class:`RadialProfile` is a spherically symmetric step function.  Node
``r_i`` is the outer edge of cell ``i`` and the profile takes the constant
value ``f_i`` on ``(r_{i-1}, r_i]`` with ``r_{-1} = 0``; beyond ``r_max`` the
profile is zero.  Every integral of the form ``4 pi int r^(2+k) f(r) dr`` is
then a finite sum of closed-form cell moments, so indicator profiles and the
level-set transforms are handled without discretisation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

FOUR_PI = 4.0 * math.pi
MIN_NODES = 16
DEFAULT_TAIL_TOL = 1e-10


class GridSpecError(ValueError):
    """Raised for an invalid grid specification."""


class DomainError(ValueError):
    """Raised when a profile lies outside the admissible density domain."""


class Space(str, Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


@dataclass(frozen=True)
class AtomConfig:
    """Nuclear charge ``Z``, electron number ``N`` and spin-state count ``q``.

    ``q`` may be any positive real.  ``AtomConfig.test_gauge()`` picks
    ``q = 6 pi^2`` so that the Thomas-Fermi constant is exactly one.
    """

    Z: float = 1.0
    N: float = 1.0
    q: float = 2.0

    def __post_init__(self):
        if not self.Z > 0:
            raise ValueError(f"Z must be positive, got {self.Z}")
        if not self.N >= 0:
            raise ValueError(f"N must be nonnegative, got {self.N}")
        if not self.q > 0:
            raise ValueError(f"q must be positive, got {self.q}")

    @property
    def gamma(self) -> float:
        return (6.0 * math.pi**2 / self.q) ** (2.0 / 3.0)

    @classmethod
    def test_gauge(cls, Z: float = 1.0, N: float = 1.0) -> "AtomConfig":
        return cls(Z=Z, N=N, q=6.0 * math.pi**2)


def _cell_moments(nodes: np.ndarray, m: int) -> np.ndarray:
    """Return ``(b^m - a^m) / m`` for every cell ``(a, b]``.

    Written as ``(b - a) * sum_j a^j b^(m-1-j) / m`` so thin cells do not
    lose digits to cancellation.
    """
    if m < 1:
        raise ValueError("moment order must be >= 1")
    b = nodes
    a = np.concatenate(([0.0], nodes[:-1]))
    acc = np.zeros_like(b)
    for j in range(m):
        acc += a**j * b ** (m - 1 - j)
    return (b - a) * acc / m


@dataclass(frozen=True, eq=False)
class RadialGrid:
    nodes: np.ndarray
    scheme: str = "custom"
    _moments: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < MIN_NODES:
            raise GridSpecError(f"a grid needs at least {MIN_NODES} nodes")
        if not np.all(np.isfinite(nodes)) or nodes[0] <= 0:
            raise GridSpecError("grid nodes must be finite and the first node positive")
        if np.any(np.diff(nodes) <= 0):
            raise GridSpecError("grid nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def edges(self) -> np.ndarray:
        """Cell boundaries ``0, r_0, ..., r_max``."""
        return np.concatenate(([0.0], self.nodes))

    def moment(self, k: int) -> np.ndarray:
        """Per-cell weights ``4 pi int_cell r^(2+k) dr`` (cached)."""
        if k not in self._moments:
            w = FOUR_PI * _cell_moments(self.nodes, 3 + k)
            w.setflags(write=False)
            self._moments[k] = w
        return self._moments[k]

    @property
    def volumes(self) -> np.ndarray:
        return self.moment(0)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, RadialGrid):
            return NotImplemented
        return self.nodes.shape == other.nodes.shape and bool(np.all(self.nodes == other.nodes))

    __hash__ = None


def make_grid(scheme: str, n: int, r_min: float, r_max: float) -> RadialGrid:
    """Build a ``"linear"`` or ``"log"`` (geometric) grid of ``n`` nodes."""
    if n < MIN_NODES:
        raise GridSpecError(f"n must be >= {MIN_NODES}, got {n}")
    if not (0 < r_min < r_max):
        raise GridSpecError(f"need 0 < r_min < r_max, got r_min={r_min}, r_max={r_max}")
    if scheme == "linear":
        nodes = np.linspace(r_min, r_max, n)
    elif scheme == "log":
        nodes = np.geomspace(r_min, r_max, n)
    else:
        raise GridSpecError(f"unknown grid scheme {scheme!r}")
    nodes[0], nodes[-1] = r_min, r_max
    return RadialGrid(nodes, scheme)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Step function on a :class:`RadialGrid`, tagged with its space."""

    grid: RadialGrid
    values: np.ndarray
    space: Space = Space.POSITION

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.nodes.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid of {self.grid.n} nodes"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "space", Space(self.space))

    @classmethod
    def from_function(
        cls,
        grid: RadialGrid,
        f: Callable[[np.ndarray], np.ndarray],
        space: Space = Space.POSITION,
        order: int = 8,
    ) -> "RadialProfile":
        """Sample ``f`` as cell averages with respect to ``r^2 dr``.

        Uses ``order``-point Gauss-Legendre inside every cell, so a
        discontinuity placed on a node is captured exactly.
        """
        x, w = np.polynomial.legendre.leggauss(order)
        a = grid.edges[:-1, None]
        b = grid.edges[1:, None]
        r = 0.5 * (b - a) * x[None, :] + 0.5 * (a + b)
        integrand = np.asarray(f(r), dtype=float) * r**2
        cell = 0.5 * (b[:, 0] - a[:, 0]) * (integrand @ w)
        return cls(grid, FOUR_PI * cell / grid.volumes, space)

    def with_values(self, values) -> "RadialProfile":
        return RadialProfile(self.grid, values, self.space)

    def scaled(self, lam: float) -> "RadialProfile":
        return self.with_values(lam * self.values)

    def is_nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) <= 0))

    def resample(self, grid: RadialGrid) -> "RadialProfile":
        """Evaluate the step function on the cells of another grid.

        Exact whenever ``grid`` refines this profile's grid; otherwise each
        target cell takes the value at its midpoint.
        """
        return RadialProfile(grid, step_values(self, grid.edges), self.space)


def step_values(p: RadialProfile, edges: np.ndarray) -> np.ndarray:
    """Value of ``p`` on each cell of an arbitrary edge array (midpoint rule)."""
    mid = 0.5 * (edges[:-1] + edges[1:])
    idx = np.searchsorted(p.grid.nodes, mid, side="left")
    padded = np.concatenate((p.values, [0.0]))
    return padded[np.minimum(idx, p.grid.n)]


def integrate_radial(p: RadialProfile, k: int = 0) -> float:
    """``4 pi int_0^r_max r^(2+k) f(r) dr`` for the step profile ``p``.

    ``k`` must exceed -3 so the origin cell stays integrable; the attraction
    term uses ``k = -1``.  Summation is exactly rounded (``math.fsum``).
    """
    if k <= -3:
        raise ValueError("weight exponent must be > -3")
    return math.fsum(p.values * p.grid.moment(k))


def mass(p: RadialProfile) -> float:
    return integrate_radial(p, 0)


def l1_distance(p: RadialProfile, q: RadialProfile) -> float:
    """Exact L1 distance between two step profiles on possibly different grids."""
    nodes = np.union1d(p.grid.nodes, q.grid.nodes)
    edges = np.concatenate(([0.0], nodes))
    vols = FOUR_PI * _cell_moments(nodes, 3)
    diff = np.abs(step_values(p, edges) - step_values(q, edges))
    return math.fsum(diff * vols)


@dataclass(frozen=True)
class DomainReport:
    in_domain: bool
    mass: float
    second_moment: float
    reason: str = ""

    def __bool__(self):
        return self.in_domain


def validate_domain(p: RadialProfile, tail_tol: float = DEFAULT_TAIL_TOL) -> DomainReport:
    """Check membership in the density domain and report the norms that define it.

    ``second_moment`` is ``int xi^2 tau`` for momentum profiles and
    ``int rho^(5/3)`` for position profiles.  Problems are reported, not raised.
    """
    v = p.values
    reasons = []
    finite = bool(np.all(np.isfinite(v)))
    if not finite:
        reasons.append("non-finite value")
    if finite and np.any(v < 0):
        reasons.append("negative value")
    vmax = float(np.max(np.abs(v))) if finite and v.size else 0.0
    if finite and abs(v[-1]) > tail_tol * vmax:
        reasons.append("tail violation")

    m = integrate_radial(p, 0) if finite else math.nan
    if not finite:
        second = math.nan
    elif p.space is Space.MOMENTUM:
        second = integrate_radial(p, 2)
    else:
        second = integrate_radial(p.with_values(np.abs(v) ** (5.0 / 3.0)), 0)
    ok = not reasons and math.isfinite(m) and math.isfinite(second)
    return DomainReport(ok, m, second, "; ".join(reasons))


def require_domain(p: RadialProfile, space: Space | None = None) -> None:
    """Raise :class:`DomainError` unless ``p`` is in-domain (and in ``space``)."""
    if space is not None and p.space is not Space(space):
        raise DomainError(f"expected a {Space(space).value}-space profile, got {p.space.value}")
    report = validate_domain(p)
    if not report.in_domain:
        raise DomainError(f"profile outside the density domain: {report.reason}")


def rearrange_decreasing(p: RadialProfile) -> RadialProfile:
    """Spherically symmetric decreasing rearrangement of a step profile.

    Cells are sorted by value (stable, descending) and re-stacked on the
    cumulative volume coordinate ``v = 4 pi r^3 / 3``.  The result lives on
    the re-stacked grid, so it is exactly equimeasurable with ``p``.
    """
    if p.is_nonincreasing():
        return p
    order = np.argsort(-p.values, kind="stable")
    vols = p.grid.volumes[order]
    cum = np.cumsum(vols)
    nodes = np.cbrt(3.0 * cum / FOUR_PI)
    values = p.values[order]
    # cells thinner than the rounding of the stacked radius vanish
    keep = np.concatenate(([True], np.diff(nodes) > 0))
    return RadialProfile(RadialGrid(nodes[keep], "custom"), values[keep], p.space)

"""Position-space Thomas-Fermi energy of spherically symmetric densities.

In units with hbar = 2m = 1 the functional is

    E_TF(rho) = 3/5 gamma int rho^(5/3) - int Z rho / |x| + D[rho],

with D[rho] the Coulomb self-energy.  For radial step densities Newton's
theorem reduces D to a single pass over the cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .radial import FOUR_PI, AtomConfig, RadialProfile, Space, integrate_radial, require_domain


@dataclass(frozen=True)
class EnergyBreakdown:
    """Kinetic, attraction and repulsion terms; attraction is stored positive."""

    kinetic: float
    attraction: float
    repulsion: float

    @property
    def total(self) -> float:
        return self.kinetic - self.attraction + self.repulsion

    def as_dict(self) -> dict:
        return {
            "kinetic": self.kinetic,
            "attraction": self.attraction,
            "repulsion": self.repulsion,
            "total": self.total,
        }


def kinetic_tf(rho: RadialProfile, cfg: AtomConfig) -> float:
    require_domain(rho, Space.POSITION)
    return 0.6 * cfg.gamma * integrate_radial(rho.with_values(rho.values ** (5.0 / 3.0)), 0)


def attraction_tf(rho: RadialProfile, cfg: AtomConfig) -> float:
    require_domain(rho, Space.POSITION)
    return cfg.Z * integrate_radial(rho, -1)


def repulsion_tf(rho: RadialProfile) -> float:
    """Coulomb self-energy ``D[rho]`` via Newton's theorem.

    ``D = 4 pi int rho(r) r Q(r) dr`` where ``Q(r)`` is the charge enclosed
    in radius ``r``.  On a cell ``(a, a + d]`` with constant value ``v`` and
    enclosed charge ``Q_a`` below it the contribution is

        4 pi v [Q_a d (a + d/2) + 4 pi v / 3 (3/2 a^3 d^2 + 2 a^2 d^3 + a d^4 + d^5 / 5)].
    """
    require_domain(rho, Space.POSITION)
    v = rho.values
    b = rho.grid.nodes
    a = rho.grid.edges[:-1]
    d = b - a
    cell_charge = v * rho.grid.volumes
    q_below = np.concatenate(([0.0], np.cumsum(cell_charge)[:-1]))
    shell = q_below * d * (a + 0.5 * d)
    self_part = (FOUR_PI / 3.0) * v * (1.5 * a**3 * d**2 + 2 * a**2 * d**3 + a * d**4 + d**5 / 5.0)
    return FOUR_PI * math.fsum(v * (shell + self_part))


def energy_tf(rho: RadialProfile, cfg: AtomConfig) -> EnergyBreakdown:
    return EnergyBreakdown(
        kinetic=kinetic_tf(rho, cfg),
        attraction=attraction_tf(rho, cfg),
        repulsion=repulsion_tf(rho),
    )

"""Momentum-space Thomas-Fermi theory on radial grids.

Position and momentum energy functionals for spherically symmetric step
profiles, the level-set transforms ``S`` and ``T`` between the two spaces,
the Thomas-Fermi minimizer (ODE shooting and direct convex minimization),
and a seeded verification harness.
"""

from .io import ProfileFormatError, dumps_profile, loads_profile, read_profile, write_profile
from .momentum import (
    LAYERCAKE_CONSTANT,
    SubstitutedProfile,
    attraction_m,
    energy_mtf,
    energy_s,
    energy_s_gradient,
    kinetic_m,
    pairwise_extremes,
    repulsion_m_direct,
    repulsion_m_layercake,
)
from .position import EnergyBreakdown, attraction_tf, energy_tf, kinetic_tf, repulsion_tf
from .radial import (
    AtomConfig,
    DomainError,
    DomainReport,
    GridSpecError,
    RadialGrid,
    RadialProfile,
    Space,
    integrate_radial,
    l1_distance,
    make_grid,
    mass,
    rearrange_decreasing,
    require_domain,
    step_values,
    validate_domain,
)
from .solver import (
    ConvergenceError,
    MinimizationResult,
    TFSolution,
    direct_minimize_mtf,
    minimizer_density,
    minimizer_momentum,
    momentum_grid,
    neutral_energy,
    solve_tf_ode,
    tf_energy_closed_form,
    tf_grid,
)
from .transforms import (
    FermiRadiusCurve,
    fermi_radius,
    fermi_radius_curve,
    round_trip_residual,
    transform_S,
    transform_T,
)
from .verify import SCENARIOS, GridSpec, Metric, ScenarioReport, emit_report, run_scenario

__version__ = "0.1.0"

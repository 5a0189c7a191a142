"""Named, seeded verification scenarios and their reports.

Each scenario evaluates one family of identities or inequalities on a seeded
corpus of piecewise-constant profiles (or on the Thomas-Fermi minimizer) and
returns a :class:`ScenarioReport` whose metrics carry value, tolerance and
status.  Given the same name, configuration, grid and seed the metrics are
bit-for-bit reproducible; only ``runtime_s`` varies.
"""

from __future__ import annotations

import json
import math
import time
import traceback
from dataclasses import asdict, dataclass, field

import numpy as np

from .momentum import (
    SubstitutedProfile,
    attraction_m,
    energy_mtf,
    energy_s,
    kinetic_m,
    repulsion_m_direct,
    repulsion_m_layercake,
)
from .position import attraction_tf, energy_tf, kinetic_tf, repulsion_tf
from .radial import (
    AtomConfig,
    RadialGrid,
    RadialProfile,
    Space,
    l1_distance,
    make_grid,
    mass,
    rearrange_decreasing,
)
from .solver import (
    direct_minimize_mtf,
    minimizer_density,
    neutral_energy,
    solve_tf_ode,
    tf_energy_closed_form,
    tf_grid,
)
from .transforms import round_trip_residual, transform_S, transform_T

SCENARIOS = (
    "isometry",
    "duality",
    "roundtrip",
    "rearrangement",
    "convexity",
    "infimum-equality",
    "minimizer-map",
    "repulsion-paths",
    "saturation",
)

REFINEMENT_FLOOR = 1e-12


@dataclass(frozen=True)
class GridSpec:
    scheme: str = "log"
    n: int = 2048
    r_min: float = 1e-3
    r_max: float = 10.0

    def build(self, n: int | None = None) -> RadialGrid:
        return make_grid(self.scheme, n or self.n, self.r_min, self.r_max)


@dataclass
class Metric:
    name: str
    value: float
    tolerance: float
    op: str = "<="

    @property
    def status(self) -> str:
        if not math.isfinite(self.value):
            return "fail"
        ok = self.value <= self.tolerance if self.op == "<=" else self.value >= self.tolerance
        return "pass" if ok else "fail"

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "status": self.status}


@dataclass
class ScenarioReport:
    scenario: str
    metrics: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    runtime_s: float = 0.0
    error: str | None = None

    @property
    def errored(self) -> bool:
        return self.error is not None

    @property
    def passed(self) -> bool:
        return not self.errored and all(m.status == "pass" for m in self.metrics)

    def as_dict(self) -> dict:
        out = {
            "scenario": self.scenario,
            "passed": self.passed,
            "metrics": [m.as_dict() for m in self.metrics],
            "config": self.config,
            "runtime_s": self.runtime_s,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def emit_report(report: ScenarioReport, format: str = "json") -> str:
    if format == "json":
        return json.dumps(report.as_dict(), indent=2)
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")
    status = "ERROR" if report.errored else ("PASS" if report.passed else "FAIL")
    lines = [f"scenario {report.scenario}: {status} ({report.runtime_s:.2f} s)"]
    if report.metrics:
        width = max(len(m.name) for m in report.metrics)
        for m in report.metrics:
            lines.append(f"  {m.name:<{width}}  {m.value: .3e} {m.op} {m.tolerance:.1e}  {m.status}")
    if report.error:
        lines.append(f"  error: {report.error}")
    return "\n".join(lines)


# -- seeded profile corpus ----------------------------------------------------

def random_step_profile(rng: np.random.Generator, grid: RadialGrid, space: Space,
                        decreasing: bool = False, pieces: tuple = (3, 12)) -> RadialProfile:
    """Piecewise-constant profile with random levels and breakpoints on grid nodes.

    Breakpoints fall inside the first 80 % of the nodes and the remainder is
    zero, so the tail condition always holds.  Non-monotone profiles get
    random level order and occasional empty shells.
    """
    k = int(rng.integers(pieces[0], pieces[1] + 1))
    support = int(0.8 * grid.n)
    cuts = np.sort(rng.choice(np.arange(1, support), size=k - 1, replace=False))
    edges = np.concatenate(([0], cuts, [support]))
    levels = np.exp(rng.uniform(-3.0, 3.0, size=k))
    if decreasing:
        levels = np.sort(levels)[::-1]
    else:
        levels[rng.random(k) < 0.2] = 0.0
    values = np.zeros(grid.n)
    for lo, hi, lev in zip(edges[:-1], edges[1:], levels):
        values[lo:hi] = lev
    return RadialProfile(grid, values, space)


def refine(grid: RadialGrid) -> RadialGrid:
    """Insert the geometric midpoint of every cell (and one node below ``r_0``)."""
    nodes = grid.nodes
    mids = np.sqrt(nodes[:-1] * nodes[1:])
    return RadialGrid(np.sort(np.concatenate(([0.5 * nodes[0]], nodes, mids))), grid.scheme)


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _ball(grid_spec: GridSpec, space: Space) -> RadialProfile:
    grid = make_grid("linear", max(grid_spec.n, 16), 1.0 / max(grid_spec.n // 2, 8), 2.0)
    grid = RadialGrid(np.union1d(grid.nodes, [1.0]), "linear")
    return RadialProfile(grid, (grid.nodes <= 1.0).astype(float), space)


# -- term-wise duality ---------------------------------------------------------

def duality_residuals(tau: RadialProfile, cfg: AtomConfig) -> dict:
    """Relative residuals of K_m = K o S, A_m = A o S, R_m = R o S for decreasing ``tau``."""
    rho = transform_S(tau, cfg)
    return {
        "kinetic": _rel(kinetic_m(tau), kinetic_tf(rho, cfg)),
        "attraction": _rel(attraction_m(tau, cfg), attraction_tf(rho, cfg)),
        "repulsion": _rel(repulsion_m_direct(tau, cfg), repulsion_tf(rho)),
    }


def duality_residuals_T(rho: RadialProfile, cfg: AtomConfig) -> dict:
    """Relative residuals of K_m o T = K, A_m o T = A, R_m o T = R for decreasing ``rho``."""
    tau = transform_T(rho, cfg)
    return {
        "kinetic": _rel(kinetic_m(tau), kinetic_tf(rho, cfg)),
        "attraction": _rel(attraction_m(tau, cfg), attraction_tf(rho, cfg)),
        "repulsion": _rel(repulsion_m_direct(tau, cfg), repulsion_tf(rho)),
    }


def _max_duality(profiles, cfg):
    worst = 0.0
    for p in profiles:
        res = duality_residuals(p, cfg) if p.space is Space.MOMENTUM else duality_residuals_T(p, cfg)
        worst = max(worst, *res.values())
    return worst


# -- scenarios ------------------------------------------------------------------

def _isometry(cfg, spec, rng, count=20):
    grid = spec.build()
    worst_t = worst_s = 0.0
    for _ in range(count):
        rho = random_step_profile(rng, grid, Space.POSITION, decreasing=True)
        worst_t = max(worst_t, _rel(mass(transform_T(rho, cfg)), mass(rho)))
        tau = random_step_profile(rng, grid, Space.MOMENTUM, decreasing=True)
        worst_s = max(worst_s, _rel(mass(transform_S(tau, cfg)), mass(tau)))
    ball = _ball(spec, Space.POSITION)
    ball_m = RadialProfile(ball.grid, ball.values, Space.MOMENTUM)
    ball_res = max(_rel(mass(transform_T(ball, cfg)), mass(ball)),
                   _rel(mass(transform_S(ball_m, cfg)), mass(ball_m)))
    return [
        Metric("T mass residual (max rel)", worst_t, 1e-6),
        Metric("S mass residual (max rel)", worst_s, 1e-6),
        Metric("ball mass residual", ball_res, 1e-14),
    ]


def _duality(cfg, spec, rng, count=20):
    grid = spec.build()
    fine = refine(grid)
    metrics = []
    for space, label in ((Space.MOMENTUM, "S"), (Space.POSITION, "T")):
        corpus = [random_step_profile(rng, grid, space, decreasing=True) for _ in range(count)]
        coarse = _max_duality(corpus, cfg)
        refined = _max_duality([p.resample(fine) for p in corpus], cfg)
        metrics.append(Metric(f"{label}: max term residual n={grid.n}", coarse, 1e-4))
        metrics.append(Metric(f"{label}: refinement excess n={fine.n}",
                              refined - max(coarse, REFINEMENT_FLOOR), 0.0))
    if cfg.N <= cfg.Z:
        sol = solve_tf_ode(cfg)
        rho_n = minimizer_density(sol, cfg, tf_grid(sol, spec.n))
        rho_2n = minimizer_density(sol, cfg, tf_grid(sol, 2 * spec.n))
        coarse = max(duality_residuals_T(rho_n, cfg).values())
        refined = max(duality_residuals_T(rho_2n, cfg).values())
        metrics.append(Metric(f"TF minimizer: max term residual n={spec.n}", coarse, 1e-4))
        metrics.append(Metric(f"TF minimizer: refinement excess n={2 * spec.n}",
                              refined - max(coarse, REFINEMENT_FLOOR), 0.0))
        tau_m = transform_T(rho_n, cfg)
        s_res = max(duality_residuals(tau_m, cfg).values())
        metrics.append(Metric("TF minimizer image: max S-term residual", s_res, 1e-4))
    return metrics


def _roundtrip(cfg, spec, rng, count=20):
    grid = spec.build()
    worst = 0.0
    for _ in range(count):
        for space in (Space.POSITION, Space.MOMENTUM):
            worst = max(worst, round_trip_residual(
                random_step_profile(rng, grid, space, decreasing=True), cfg))
    ball = _ball(spec, Space.POSITION)
    exp_grid = make_grid("log", 2048, 1e-6, 60.0)
    expo = RadialProfile.from_function(exp_grid, lambda r: np.exp(-r), Space.POSITION)
    return [
        Metric("random profiles: max round-trip L1", worst, 1e-10),
        Metric("ball round-trip L1", round_trip_residual(ball, cfg), 1e-14),
        Metric("exp(-r) round-trip L1 (n=2048)", round_trip_residual(expo, cfg), 1e-3),
    ]


def _rearrangement(cfg, spec, rng, count=100):
    grid = spec.build()
    energy_excess = -math.inf
    att = rep = mss = 0.0
    kin_excess = -math.inf
    for _ in range(count):
        tau = random_step_profile(rng, grid, Space.MOMENTUM, decreasing=False)
        star = rearrange_decreasing(tau)
        e, e_star = energy_mtf(tau, cfg), energy_mtf(star, cfg)
        energy_excess = max(energy_excess, e_star.total - e.total)
        kin_excess = max(kin_excess, e_star.kinetic - e.kinetic)
        att = max(att, _rel(e_star.attraction, e.attraction))
        rep = max(rep, _rel(e_star.repulsion, e.repulsion))
        mss = max(mss, _rel(mass(star), mass(tau)))
    return [
        Metric("max E(tau*) - E(tau)", energy_excess, 1e-8),
        Metric("max K_m(tau*) - K_m(tau)", kin_excess, 1e-8),
        Metric("A_m invariance (max rel)", att, 1e-6),
        Metric("R_m invariance (max rel)", rep, 1e-6),
        Metric("mass invariance (max rel)", mss, 1e-8),
    ]


def _convexity(cfg, spec, rng, count=100):
    grid = spec.build(min(spec.n, 512))
    min_gap = math.inf
    min_rel_gap = math.inf
    for _ in range(count):
        s1 = random_step_profile(rng, grid, Space.MOMENTUM).values
        s2 = random_step_profile(rng, grid, Space.MOMENTUM).values
        e1 = energy_s(SubstitutedProfile(grid, s1), cfg)
        e2 = energy_s(SubstitutedProfile(grid, s2), cfg)
        em = energy_s(SubstitutedProfile(grid, 0.5 * (s1 + s2)), cfg)
        gap = 0.5 * (e1 + e2) - em
        min_gap = min(min_gap, gap)
        min_rel_gap = min(min_rel_gap, gap / max(abs(e1), abs(e2), abs(em)))
    return [
        Metric("min midpoint gap", min_gap, 0.0, op=">="),
        Metric("min relative midpoint gap (strictness)", min_rel_gap, 1e-12, op=">="),
    ]


def _tf_reference(cfg):
    sol = solve_tf_ode(cfg)
    rho = minimizer_density(sol, cfg)
    return sol, rho, transform_T(rho, cfg)


def _infimum_equality(cfg, spec, rng):
    if cfg.N > cfg.Z:
        raise ValueError("infimum-equality needs N <= Z")
    sol, rho, tau = _tf_reference(cfg)
    e_tf = energy_tf(rho, cfg).total
    e_m = energy_mtf(tau, cfg).total
    direct = direct_minimize_mtf(cfg)
    metrics = [
        Metric("|E_mTF(T rho_m) - E_TF(rho_m)| rel", _rel(e_m, e_tf), 1e-4),
        Metric("E_TF(rho_m) vs closed form rel", _rel(e_tf, tf_energy_closed_form(sol, cfg)), 1e-3),
        Metric("direct minimum vs E_TF(rho_m) rel", _rel(direct.energy, e_tf), 1e-3),
        Metric("direct minimizer converged", float(direct.converged), 1.0, op=">="),
    ]
    if cfg.N == cfg.Z:
        metrics.append(Metric("neutral energy vs -(3/7)|phi'(0)|Z^2/b rel",
                              _rel(e_tf, neutral_energy(sol, cfg)), 1e-3))
    return metrics


def _minimizer_map(cfg, spec, rng, count=10):
    if cfg.N > cfg.Z:
        raise ValueError("minimizer-map needs N <= Z")
    sol, rho, tau = _tf_reference(cfg)
    e_min = energy_mtf(tau, cfg).total
    direct = direct_minimize_mtf(cfg)
    worst_gain = math.inf
    m = mass(tau)
    for _ in range(count):
        # mass-preserving multiplicative wiggle of relative size delta
        shape = random_step_profile(rng, tau.grid, Space.MOMENTUM).values
        sign = rng.choice([-1.0, 1.0], size=tau.grid.n)
        delta = 10.0 ** rng.uniform(-3, -1)
        wiggle = tau.with_values(tau.values * (1.0 + delta * sign * shape / shape.max()))
        perturbed = rearrange_decreasing(wiggle.scaled(m / mass(wiggle)))
        worst_gain = min(worst_gain, energy_mtf(perturbed, cfg).total - e_min)
    return [
        Metric("mass(T rho_m) - N rel", _rel(m, cfg.N), 1e-4),
        Metric("direct minimizer L1 distance rel", l1_distance(direct.tau, tau) / m, 1e-2),
        Metric("direct minimizer mass rel", _rel(direct.mass, cfg.N), 1e-4),
        Metric("min E(perturbed) - E(tau_m)", worst_gain, 0.0, op=">="),
    ]


def _repulsion_paths(cfg, spec, rng, count=50):
    grid = spec.build()
    worst = 0.0
    for _ in range(count):
        tau = random_step_profile(rng, grid, Space.MOMENTUM, decreasing=bool(rng.integers(2)))
        worst = max(worst, _rel(repulsion_m_direct(tau, cfg), repulsion_m_layercake(tau, cfg)))
    return [Metric("direct vs layer-cake repulsion (max rel)", worst, 1e-5)]


def _saturation(cfg, spec, rng):
    over = AtomConfig(Z=cfg.Z, N=1.5 * cfg.Z, q=cfg.q)
    result = direct_minimize_mtf(over, relaxed=True)
    return [
        Metric("relaxed minimizer mass vs Z rel", _rel(result.mass, cfg.Z), 1e-2),
        Metric("relaxed minimizer converged", float(result.converged), 1.0, op=">="),
    ]


_RUNNERS = {
    "isometry": _isometry,
    "duality": _duality,
    "roundtrip": _roundtrip,
    "rearrangement": _rearrangement,
    "convexity": _convexity,
    "infimum-equality": _infimum_equality,
    "minimizer-map": _minimizer_map,
    "repulsion-paths": _repulsion_paths,
    "saturation": _saturation,
}


def run_scenario(name: str, cfg: AtomConfig, grid: GridSpec | None = None, seed: int = 7) -> ScenarioReport:
    """Run one named scenario; failures inside the numerics become errored reports."""
    if name not in _RUNNERS:
        raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    grid = grid or GridSpec()
    config = {"Z": cfg.Z, "N": cfg.N, "q": cfg.q, "gamma": cfg.gamma,
              "grid": asdict(grid), "seed": seed}
    report = ScenarioReport(scenario=name, config=config)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    try:
        report.metrics = _RUNNERS[name](cfg, grid, rng)
    except Exception as exc:  # surfaced as an errored report, exit code 2
        report.error = f"{type(exc).__name__}: {exc}"
        report.config["traceback"] = traceback.format_exc(limit=3)
    report.runtime_s = time.perf_counter() - start
    return report

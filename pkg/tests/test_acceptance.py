"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line; the lines are printed as they
happen (visible with ``-s``) and again in the pytest terminal summary.
Run standalone with ``python tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest

from mtf import (
    AtomConfig,
    Space,
    SubstitutedProfile,
    attraction_m,
    attraction_tf,
    direct_minimize_mtf,
    energy_mtf,
    energy_s,
    energy_tf,
    kinetic_m,
    kinetic_tf,
    l1_distance,
    make_grid,
    mass,
    minimizer_density,
    neutral_energy,
    rearrange_decreasing,
    repulsion_m_direct,
    repulsion_m_layercake,
    repulsion_tf,
    solve_tf_ode,
    tf_grid,
    transform_S,
    transform_T,
)
from mtf.verify import random_step_profile, refine

from conftest import ACCEPTANCE_LINES, BALL_TOTAL, ball

SEED = 7
N_GRID = 2048


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def decreasing_corpus(space, count=20, n=N_GRID, seed=SEED):
    rng = np.random.default_rng(seed)
    grid = make_grid("log", n, 1e-3, 10.0)
    return [random_step_profile(rng, grid, space, decreasing=True) for _ in range(count)]


def term_residuals(rho, tau, cfg):
    return max(
        rel(kinetic_m(tau), kinetic_tf(rho, cfg)),
        rel(attraction_m(tau, cfg), attraction_tf(rho, cfg)),
        rel(repulsion_m_direct(tau, cfg), repulsion_tf(rho)),
    )


def corpus_residual(profiles, cfg):
    worst = 0.0
    for p in profiles:
        if p.space is Space.MOMENTUM:
            worst = max(worst, term_residuals(transform_S(p, cfg), p, cfg))
        else:
            worst = max(worst, term_residuals(p, transform_T(p, cfg), cfg))
    return worst


def test_criterion_1_ball_fixed_point():
    start = time.perf_counter()
    cfg = AtomConfig.test_gauge()
    e_tf = energy_tf(ball(Space.POSITION), cfg).total
    e_m = energy_mtf(ball(Space.MOMENTUM), cfg).total
    elapsed = time.perf_counter() - start
    err = max(rel(e_tf, BALL_TOTAL), rel(e_m, BALL_TOTAL))
    ok = err < 1e-6 and elapsed < 1.0
    record(1, "ball fixed point", ok,
           f"E_TF={e_tf:.12f} E_mTF={e_m:.12f} closed form={BALL_TOTAL:.12f} "
           f"max rel err={err:.1e} (<1e-6), {elapsed:.3f} s (<1 s)")
    assert ok


def test_criterion_2_duality():
    start = time.perf_counter()
    cfg = AtomConfig.test_gauge()
    floor = 1e-12  # the identities are exact for step profiles; round-off is the floor
    rows = []
    for space, label in ((Space.MOMENTUM, "S"), (Space.POSITION, "T")):
        corpus = decreasing_corpus(space)
        fine = [p.resample(refine(p.grid)) for p in corpus]
        rows.append((label, corpus_residual(corpus, cfg), corpus_residual(fine, cfg)))
    neutral = AtomConfig(Z=1.0, N=1.0, q=6 * math.pi**2)
    sol = solve_tf_ode(neutral)
    rho_n = minimizer_density(sol, neutral, tf_grid(sol, N_GRID))
    rho_2n = minimizer_density(sol, neutral, tf_grid(sol, 2 * N_GRID))
    rows.append(("TF minimizer", term_residuals(rho_n, transform_T(rho_n, neutral), neutral),
                 term_residuals(rho_2n, transform_T(rho_2n, neutral), neutral)))
    elapsed = time.perf_counter() - start
    ok = elapsed < 60.0
    parts = []
    for label, coarse, refined in rows:
        ok &= coarse < 1e-4 and refined <= max(coarse, floor)
        parts.append(f"{label}: {coarse:.1e} -> {refined:.1e}")
    record(2, "term-wise duality K, A, R under S and T", ok,
           "; ".join(parts) + f" (n={N_GRID} -> {2 * N_GRID}, <1e-4, non-increasing), {elapsed:.1f} s (<60 s)")
    assert ok


def test_criterion_3_isometry():
    cfg = AtomConfig.test_gauge()
    worst = 0.0
    for p in decreasing_corpus(Space.POSITION):
        worst = max(worst, rel(mass(transform_T(p, cfg)), mass(p)))
    for p in decreasing_corpus(Space.MOMENTUM):
        worst = max(worst, rel(mass(transform_S(p, cfg)), mass(p)))
    ok = worst < 1e-6
    record(3, "isometry of S and T", ok, f"max rel mass residual {worst:.1e} (<1e-6) over 40 profiles")
    assert ok


def test_criterion_4_repulsion_paths():
    cfg = AtomConfig.test_gauge()
    rng = np.random.default_rng(SEED)
    grid = make_grid("log", N_GRID, 1e-3, 10.0)
    worst = 0.0
    for i in range(50):
        tau = random_step_profile(rng, grid, Space.MOMENTUM, decreasing=bool(i % 2))
        worst = max(worst, rel(repulsion_m_direct(tau, cfg), repulsion_m_layercake(tau, cfg)))
    ok = worst < 1e-5
    record(4, "direct vs layer-cake repulsion", ok, f"max rel diff {worst:.1e} (<1e-5) over 50 profiles")
    assert ok


def test_criterion_5_tf_solver():
    start = time.perf_counter()
    masses = {}
    slope = energy_err = None
    for ratio in (0.25, 0.5, 1.0):
        cfg = AtomConfig(Z=1.0, N=ratio, q=2.0)
        sol = solve_tf_ode(cfg)
        rho = minimizer_density(sol, cfg)
        masses[ratio] = rel(mass(rho), cfg.N)
        if ratio == 1.0:
            slope = sol.slope0
            energy_err = rel(energy_tf(rho, cfg).total, neutral_energy(sol, cfg))
    elapsed = time.perf_counter() - start
    ok = (abs(slope + 1.588071) < 1e-3 and max(masses.values()) < 1e-4
          and energy_err < 1e-3 and elapsed < 30.0)
    record(5, "TF solver", ok,
           f"slope0={slope:.10f} (-1.588071 +- 1e-3); mass rel err "
           + ", ".join(f"N/Z={k}: {v:.1e}" for k, v in masses.items())
           + f" (<1e-4); neutral energy rel err {energy_err:.1e} (<1e-3); {elapsed:.1f} s (<30 s)")
    assert ok


@pytest.mark.parametrize("ratio", [1.0, 0.5])
def test_criterion_6_infimum_and_minimizer_map(ratio):
    cfg = AtomConfig(Z=1.0, N=ratio, q=2.0)
    sol = solve_tf_ode(cfg)
    rho = minimizer_density(sol, cfg)
    tau = transform_T(rho, cfg)
    e_tf = energy_tf(rho, cfg).total
    gap = rel(energy_mtf(tau, cfg).total, e_tf)
    direct = direct_minimize_mtf(cfg)
    e_gap = rel(direct.energy, e_tf)
    l1 = l1_distance(direct.tau, tau) / mass(tau)
    ok = direct.converged and gap < 1e-4 and e_gap < 1e-3 and l1 < 1e-2
    record(6, f"infimum equality and minimizer map (N/Z={ratio})", ok,
           f"|E_mTF(T rho_m) - E_TF(rho_m)| rel {gap:.1e} (<1e-4); direct energy rel {e_gap:.1e} (<1e-3); "
           f"direct L1 rel {l1:.1e} (<1e-2); converged={direct.converged}")
    assert ok


def test_criterion_7_rearrangement():
    cfg = AtomConfig.test_gauge()
    rng = np.random.default_rng(SEED)
    grid = make_grid("log", N_GRID, 1e-3, 10.0)
    excess = -math.inf
    att = rep = 0.0
    monotone = 0
    for _ in range(100):
        tau = random_step_profile(rng, grid, Space.MOMENTUM, decreasing=False)
        monotone += tau.is_nonincreasing()
        e, e_star = energy_mtf(tau, cfg), energy_mtf(rearrange_decreasing(tau), cfg)
        excess = max(excess, e_star.total - e.total)
        att = max(att, rel(e_star.attraction, e.attraction))
        rep = max(rep, rel(e_star.repulsion, e.repulsion))
    ok = excess <= 1e-8 and att < 1e-6 and rep < 1e-6
    record(7, "rearrangement", ok,
           f"max E(tau*)-E(tau) {excess:.1e} (<=1e-8); A_m rel {att:.1e}, R_m rel {rep:.1e} (<1e-6); "
           f"{100 - monotone}/100 profiles non-monotone")
    assert ok


def test_criterion_8_convexity():
    cfg = AtomConfig.test_gauge()
    rng = np.random.default_rng(SEED)
    grid = make_grid("log", 512, 1e-3, 10.0)
    gaps = []
    for _ in range(100):
        s1 = random_step_profile(rng, grid, Space.MOMENTUM).values
        s2 = random_step_profile(rng, grid, Space.MOMENTUM).values
        assert not np.array_equal(s1, s2)
        e1 = energy_s(SubstitutedProfile(grid, s1), cfg)
        e2 = energy_s(SubstitutedProfile(grid, s2), cfg)
        em = energy_s(SubstitutedProfile(grid, 0.5 * (s1 + s2)), cfg)
        gaps.append((0.5 * (e1 + e2) - em) / max(abs(e1), abs(e2)))
    # strictness: every gap must clear the quadrature round-off by a wide margin
    ok = min(gaps) > 1e-12
    record(8, "midpoint convexity of E_s", ok,
           f"min relative gap {min(gaps):.2e} (>0, above 1e-12 round-off) over 100 distinct pairs")
    assert ok


def test_criterion_9_saturation():
    cfg = AtomConfig(Z=1.0, N=1.5, q=2.0)
    res = direct_minimize_mtf(cfg, relaxed=True)
    err = rel(res.mass, cfg.Z)
    ok = res.converged and err < 1e-2
    record(9, "saturation at N = 1.5 Z", ok,
           f"relaxed minimizer mass {res.mass:.8f}, rel err vs Z {err:.1e} (<1e-2); "
           f"multiplier {res.multiplier:g}; converged={res.converged}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))

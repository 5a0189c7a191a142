"""Direct minimization in the convexifying variable sigma = tau^(2/3).

The momentum functional is strictly convex in sigma, so a bound-constrained
quasi-Newton solve with a mass multiplier finds the same minimizer as the
ODE route.  Asking for more electrons than the nuclear charge with the
constraint relaxed to mass <= N leaves exactly Z electrons bound.
"""

# %%
import numpy as np

from mtf import (
    AtomConfig,
    SubstitutedProfile,
    direct_minimize_mtf,
    energy_s,
    l1_distance,
    make_grid,
    mass,
    minimizer_momentum,
    solve_tf_ode,
    tf_energy_closed_form,
)

# %% midpoint convexity on a couple of random sigma pairs
cfg = AtomConfig(q=2.0)
rng = np.random.default_rng(0)
grid = make_grid("log", 256, 1e-2, 20.0)
for _ in range(3):
    s1, s2 = (np.where(grid.nodes < 10, rng.random(grid.n), 0.0) for _ in range(2))
    e1, e2 = energy_s(SubstitutedProfile(grid, s1), cfg), energy_s(SubstitutedProfile(grid, s2), cfg)
    em = energy_s(SubstitutedProfile(grid, 0.5 * (s1 + s2)), cfg)
    print(f"(E1 + E2) / 2 - E(mid) = {0.5 * (e1 + e2) - em:.4e}")

# %% neutral and ionic: compare with the ODE minimizer
for ratio in (1.0, 0.5):
    cfg = AtomConfig(Z=1.0, N=ratio, q=2.0)
    sol = solve_tf_ode(cfg)
    ref = minimizer_momentum(sol, cfg)
    res = direct_minimize_mtf(cfg)
    print(f"\nN/Z = {ratio}: converged={res.converged}, {res.iterations} L-BFGS-B iterations, mu = {res.multiplier:.6g}")
    print(f"  energy {res.energy:.8f} vs closed form {tf_energy_closed_form(sol, cfg):.8f}")
    print(f"  mass {res.mass:.8f}; relative L1 distance to T(rho_m) {l1_distance(res.tau, ref) / mass(ref):.2e}")

# %% saturation: ask for 1.5 Z electrons, allow any mass up to that
over = AtomConfig(Z=1.0, N=1.5, q=2.0)
res = direct_minimize_mtf(over, relaxed=True)
print(f"\nN = 1.5 Z, relaxed: bound mass {res.mass:.6f}, multiplier {res.multiplier}")

"""The Thomas-Fermi atom and its momentum-space image.

The minimizer of the position functional comes from the screening-function
ODE phi'' = phi^(3/2) / sqrt(x).  Its image under T has the same energy and
is the momentum-space minimizer.
"""

# %%
import math

from mtf import (
    AtomConfig,
    energy_mtf,
    energy_tf,
    mass,
    minimizer_density,
    solve_tf_ode,
    tf_energy_closed_form,
    transform_T,
)

# %% neutral atom, Z = N = 1, q = 2
cfg = AtomConfig(Z=1.0, N=1.0, q=2.0)
sol = solve_tf_ode(cfg)
print(f"phi'(0) = {sol.slope0:.13f}, bracket width {sol.bracket[1] - sol.bracket[0]:.1e}")
print(f"b = {sol.length_scale:.6f}; the bracketing trajectory reaches zero at x = {sol.x_cut:.1f}")
print(f"charge lost beyond that point: {sol.escape:.2e} Z")

rho = minimizer_density(sol, cfg)
tau = transform_T(rho, cfg)
e = energy_tf(rho, cfg)
print(f"\nmass(rho_m) = {mass(rho):.8f}, mass(T rho_m) = {mass(tau):.8f}")
print(f"E_TF(rho_m)     = {e.total:.10f}")
print(f"E_mTF(T rho_m)  = {energy_mtf(tau, cfg).total:.10f}")
print(f"-(3/7)|phi'(0)| Z^2 / b = {tf_energy_closed_form(sol, cfg):.10f}")
print(f"virial: K / |E| = {e.kinetic / -e.total:.6f}, A / R = {e.attraction / e.repulsion:.6f}")

# %% positive ions: phi reaches zero at x0 with x0 |phi'(x0)| = 1 - N/Z
print(f"\n{'N/Z':>6}{'phi(0)':>16}{'x0':>10}{'mass':>14}{'E_TF':>14}{'closed form':>14}")
for ratio in (0.25, 0.5, 0.75, 0.9):
    ion = AtomConfig(Z=1.0, N=ratio, q=2.0)
    s = solve_tf_ode(ion)
    r = minimizer_density(s, ion)
    print(f"{ratio:6.2f}{s.slope0:16.10f}{s.x0:10.4f}{mass(r):14.10f}"
          f"{energy_tf(r, ion).total:14.8f}{tf_energy_closed_form(s, ion):14.8f}")

# %% the dimensionless solution does not depend on Z; energies scale as Z^(7/3)
for Z in (1.0, 10.0, 92.0):
    c = AtomConfig(Z=Z, N=Z, q=2.0)
    s = solve_tf_ode(c)
    print(f"Z = {Z:5.0f}: slope {s.slope0:.13f}, E / Z^(7/3) = {tf_energy_closed_form(s, c) / Z ** (7 / 3):.10f}")

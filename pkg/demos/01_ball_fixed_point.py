"""The unit ball is a fixed point of both transforms.

With q = 6 pi^2 the Thomas-Fermi constant gamma is 1, the indicator of the
unit ball is mapped to itself by S and T, and both functionals give the same
energy on it.  Every number below has a closed form.
"""

# %%
import math

import numpy as np

from mtf import (
    AtomConfig,
    RadialGrid,
    RadialProfile,
    Space,
    energy_mtf,
    energy_tf,
    l1_distance,
    mass,
    repulsion_m_layercake,
    transform_S,
    transform_T,
)

cfg = AtomConfig.test_gauge()
print(f"gamma = {cfg.gamma!r}")

# %% a grid with a node exactly at r = 1 makes the indicator exact
nodes = np.union1d(np.linspace(1 / 32, 2.0, 64), [1.0])
grid = RadialGrid(nodes, "linear")
rho = RadialProfile(grid, (nodes <= 1.0).astype(float), Space.POSITION)
tau = RadialProfile(grid, rho.values, Space.MOMENTUM)

print(f"mass        {mass(rho):.15f}   4 pi / 3 = {4 * math.pi / 3:.15f}")

# %% term by term
e_tf = energy_tf(rho, cfg)
e_m = energy_mtf(tau, cfg)
closed = {
    "kinetic": 4 * math.pi / 5,
    "attraction": 2 * math.pi,
    "repulsion": 0.6 * (4 * math.pi / 3) ** 2,
}
closed["total"] = closed["kinetic"] - closed["attraction"] + closed["repulsion"]
print(f"\n{'term':<11}{'E_TF':>20}{'E_mTF':>20}{'closed form':>20}")
for key in closed:
    print(f"{key:<11}{e_tf.as_dict()[key]:>20.15f}{e_m.as_dict()[key]:>20.15f}{closed[key]:>20.15f}")

# %% the layer-cake repulsion agrees with the pairwise sum
print(f"\nlayer-cake repulsion {repulsion_m_layercake(tau, cfg):.15f}")

# %% S and T fix the ball
print(f"|T(ball) - ball|_1 = {l1_distance(transform_T(rho, cfg), tau):.3e}")
print(f"|S(ball) - ball|_1 = {l1_distance(transform_S(tau, cfg), rho):.3e}")

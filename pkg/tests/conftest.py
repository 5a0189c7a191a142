import math

import numpy as np
import pytest

from mtf import AtomConfig, RadialGrid, RadialProfile, Space, make_grid, solve_tf_ode

BALL_TOTAL = 4 * math.pi / 5 - 2 * math.pi + 0.6 * (4 * math.pi / 3) ** 2

ACCEPTANCE_LINES: list[str] = []


def ball_grid(n: int = 64, r_max: float = 2.0) -> RadialGrid:
    """Linear grid on (0, r_max] with a node exactly at 1."""
    nodes = np.union1d(np.linspace(r_max / n, r_max, n), [1.0])
    return RadialGrid(nodes, "linear")


def ball(space=Space.POSITION, height: float = 1.0, n: int = 64) -> RadialProfile:
    grid = ball_grid(n)
    return RadialProfile(grid, height * (grid.nodes <= 1.0), space)


def random_steps(rng, n=256, decreasing=False, space=Space.MOMENTUM, r_max=5.0):
    grid = make_grid("log", n, 1e-3, r_max)
    k = int(rng.integers(2, 10))
    cuts = np.sort(rng.choice(np.arange(1, int(0.8 * n)), size=k, replace=False))
    levels = np.exp(rng.uniform(-2, 2, size=k))
    if decreasing:
        levels = np.sort(levels)[::-1]
    values = np.zeros(n)
    lo = 0
    for hi, lev in zip(cuts, levels):
        values[lo:hi] = lev
        lo = hi
    return RadialProfile(grid, values, space)


@pytest.fixture
def gauge():
    return AtomConfig.test_gauge()


@pytest.fixture(scope="session")
def neutral_solution():
    cfg = AtomConfig(Z=1.0, N=1.0, q=2.0)
    return cfg, solve_tf_ode(cfg)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

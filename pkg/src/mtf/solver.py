"""Thomas-Fermi minimizers: the screening-function ODE and a direct convex descent.

The Euler-Lagrange equation of the position functional, with

    rho(r) = gamma^(-3/2) (Z phi(r / b) / r)^(3/2),   b = gamma (4 pi)^(-2/3) Z^(-1/3),

becomes the parameter-free problem ``phi'' = phi^(3/2) / sqrt(x)``,
``phi(0) = 1``.  The electron charge inside ``x`` is ``Z (1 - phi + x phi')``,
so an ion with ``N < Z`` electrons has ``phi(x0) = 0`` and
``x0 |phi'(x0)| = 1 - N/Z``; the neutral atom is the separatrix between
trajectories that reach zero and those that turn back up.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, minimize

from .momentum import SubstitutedProfile, energy_mtf, energy_s_gradient
from .radial import AtomConfig, RadialGrid, RadialProfile, Space, make_grid, mass
from .transforms import transform_T

log = logging.getLogger(__name__)

X_SERIES = 1e-4
X_CUTOFF = 50.0


class ConvergenceError(RuntimeError):
    pass


def _series(slope: float, x):
    """Small-x expansion of phi and phi' started at phi(0) = 1, phi'(0) = slope."""
    sx = np.sqrt(x)
    phi = 1 + slope * x + 4 / 3 * x * sx + 0.4 * slope * x**2 * sx + x**3 / 3
    dphi = slope + 2 * sx + slope * x * sx + x**2
    return phi, dphi


def _series_charge(slope: float, x):
    # 1 - phi + x phi' with the leading cancellation done by hand
    sx = np.sqrt(x)
    return 2 / 3 * x * sx + 0.6 * slope * x**2 * sx + 2 / 3 * x**3


def _rhs(x, y):
    return (y[1], max(y[0], 0.0) ** 1.5 / math.sqrt(x))


def _hits_zero(x, y):
    return y[0]


_hits_zero.terminal = True
_hits_zero.direction = -1


def _turns_up(x, y):
    return y[1]


_turns_up.terminal = True
_turns_up.direction = 1


def _shoot(slope: float, x_end: float, rtol: float, dense: bool = False):
    """Integrate until phi hits zero or turns up, doubling the range as needed.

    Returns the solution and the range that was finally used.
    """
    y0 = _series(slope, X_SERIES)
    while True:
        sol = solve_ivp(_rhs, (X_SERIES, x_end), y0, method="DOP853", rtol=rtol,
                        atol=1e-300, events=(_hits_zero, _turns_up), dense_output=dense)
        if sol.status == 1:
            return sol, x_end
        if sol.status < 0:
            raise ConvergenceError(f"integration failed at slope {slope!r}: {sol.message}")
        x_end *= 2.0
        if x_end > 1e6:
            raise ConvergenceError(f"trajectory at slope {slope!r} undecided up to x = {x_end:g}")


def _escape_charge(sol) -> float:
    """``x0 |phi'(x0)|`` for a trajectory that reached zero, else 0."""
    if sol.t_events[0].size:
        x0 = sol.t_events[0][0]
        return x0 * abs(sol.y_events[0][0][1])
    return 0.0


@dataclass(frozen=True)
class TFSolution:
    """Dimensionless screening function for a given ``N / Z``.

    ``x0`` is the ionic cutoff (``inf`` for the neutral atom).  ``x_cut`` is
    where the returned trajectory actually ends: for ions it equals ``x0``;
    for the neutral atom it is the zero of the bracketing trajectory, beyond
    which a charge fraction ``escape`` is missing.
    """

    slope0: float
    x0: float
    x_cut: float
    escape: float
    length_scale: float
    ratio: float
    x: np.ndarray
    phi: np.ndarray
    bracket: tuple
    _dense: object = field(repr=False, compare=False, default=None)

    def evaluate(self, x):
        """phi and phi' at ``x``; both vanish beyond ``x_cut``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        phi = np.zeros_like(x)
        dphi = np.zeros_like(x)
        small = x < X_SERIES
        phi[small], dphi[small] = _series(self.slope0, x[small])
        mid = ~small & (x <= self.x_cut)
        if np.any(mid):
            y = self._dense(x[mid])
            phi[mid], dphi[mid] = np.clip(y[0], 0.0, None), y[1]
        return phi, dphi

    def charge_fraction(self, x):
        """Electron charge inside ``x`` in units of ``Z``: ``1 - phi + x phi'``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        small = x < X_SERIES
        out[small] = _series_charge(self.slope0, x[small])
        inside = ~small & (x < self.x_cut)
        phi, dphi = self.evaluate(x[inside])
        out[inside] = 1.0 - phi + x[inside] * dphi
        out[~small & ~inside] = 1.0 - self.escape
        return out


def solve_tf_ode(cfg: AtomConfig, tol: float = 1e-8, x_cutoff: float = X_CUTOFF,
                 rtol: float = 1e-13) -> TFSolution:
    """Shoot on the initial slope until the ionic boundary condition holds.

    Bisection runs to machine precision on the slope; ``tol`` is the bracket
    width that must be reached for the result to count as converged.
    """
    if cfg.N > cfg.Z:
        raise ValueError("no TF minimizer beyond neutrality (N > Z)")
    if not cfg.N > 0:
        raise ValueError("N must be positive")
    target = 1.0 - cfg.N / cfg.Z
    b = cfg.gamma * (4 * math.pi) ** (-2 / 3) * cfg.Z ** (-1 / 3)

    reach = [x_cutoff]

    def too_steep(slope):
        sol, reach[0] = _shoot(slope, reach[0], rtol)
        return _escape_charge(sol) > target

    hi = -1.0
    if too_steep(hi):
        raise ConvergenceError("slope -1 already reaches zero; bracket lost")
    lo = -2.0
    while not too_steep(lo):
        lo *= 2.0
        if lo < -1e8:
            raise ConvergenceError(f"no steep bracket found for N/Z = {cfg.N / cfg.Z}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if too_steep(mid):
            lo = mid
        else:
            hi = mid
    if hi - lo > tol:
        raise ConvergenceError(f"bisection stalled with bracket [{lo!r}, {hi!r}]")
    log.debug("TF slope bracket [%r, %r]", lo, hi)

    sol, _ = _shoot(lo, reach[0], rtol, dense=True)
    x_cut = float(sol.t_events[0][0])
    escape = _escape_charge(sol)
    neutral = target == 0.0
    if not neutral and abs(escape - target) > 1e-6:
        raise ConvergenceError(f"ionic condition missed: x0|phi'(x0)| = {escape}, want {target}")
    return TFSolution(
        slope0=lo,
        x0=math.inf if neutral else x_cut,
        x_cut=x_cut,
        escape=escape,
        length_scale=b,
        ratio=cfg.N / cfg.Z,
        x=sol.t,
        phi=np.clip(sol.y[0], 0.0, None),
        bracket=(lo, hi),
        _dense=sol.sol,
    )


def tf_grid(sol: TFSolution, n: int = 4096, r_min_factor: float = 1e-10,
            extend: float = 1.25) -> RadialGrid:
    """Log grid from ``r_min_factor * b`` to a little past the density's support."""
    b = sol.length_scale
    return make_grid("log", n, r_min_factor * b, extend * b * sol.x_cut)


def minimizer_density(sol: TFSolution, cfg: AtomConfig, grid: RadialGrid | None = None) -> RadialProfile:
    """Cell averages of the TF density, from differences of the enclosed charge.

    The enclosed charge telescopes, so the profile's mass is exactly
    ``Z (1 - escape)`` whenever the grid covers the support.
    """
    if grid is None:
        grid = tf_grid(sol)
    b = sol.length_scale
    support = b * sol.x_cut
    if grid.r_max < support:
        if math.isfinite(sol.x0):
            raise ValueError(f"grid r_max = {grid.r_max:g} ends inside the ionic support {support:g}")
        warnings.warn("grid truncates the neutral-atom density; mass will fall short of N")
    charge = cfg.Z * sol.charge_fraction(grid.edges / b)
    charge[0] = 0.0
    cell = np.clip(np.diff(charge), 0.0, None)
    values = np.minimum.accumulate(cell / grid.volumes)
    return RadialProfile(grid, values, Space.POSITION)


def minimizer_momentum(sol: TFSolution, cfg: AtomConfig, grid: RadialGrid | None = None) -> RadialProfile:
    return transform_T(minimizer_density(sol, cfg, grid), cfg)


def neutral_energy(sol: TFSolution, cfg: AtomConfig) -> float:
    """Closed-form neutral TF energy ``-(3/7) |phi'(0)| Z^2 / b``."""
    return -3.0 / 7.0 * abs(sol.slope0) * cfg.Z**2 / sol.length_scale


def tf_energy_closed_form(sol: TFSolution, cfg: AtomConfig) -> float:
    """Closed-form TF energy for ``N <= Z``.

    ``-(3/7) Z^2 / b * (|phi'(0)| - (1 - N/Z)^2 / x0)``; the ionic correction
    vanishes for the neutral atom.
    """
    correction = 0.0 if math.isinf(sol.x0) else (1.0 - sol.ratio) ** 2 / sol.x0
    return -3.0 / 7.0 * cfg.Z**2 / sol.length_scale * (abs(sol.slope0) - correction)


def momentum_scale(cfg: AtomConfig) -> float:
    """Natural momentum unit ``sqrt(Z / b)`` of the TF atom."""
    b = cfg.gamma * (4 * math.pi) ** (-2 / 3) * cfg.Z ** (-1 / 3)
    return math.sqrt(cfg.Z / b)


def momentum_grid(cfg: AtomConfig, n: int = 3072, lo: float = 1e-4, hi: float = 1e4) -> RadialGrid:
    k0 = momentum_scale(cfg)
    return make_grid("log", n, lo * k0, hi * k0)


@dataclass(frozen=True)
class MinimizationResult:
    tau: RadialProfile
    energy: float
    mass: float
    multiplier: float
    converged: bool
    iterations: int
    message: str = ""


def _inner_minimize(grid, cfg, mu, sigma0, max_iter, tol):
    """Minimise ``E_s(sigma) + mu * mass(sigma^(3/2))`` over ``sigma >= 0``."""
    vol = grid.volumes
    # diagonal rescaling by the curvature of the local terms at the start
    scale = np.sqrt(0.75 * (grid.moment(2) + mu * vol) / np.sqrt(np.maximum(sigma0, 1e-300)))
    scale = np.where(np.isfinite(scale) & (scale > 0), scale, 1.0)

    def fun(y):
        sigma = np.clip(y / scale, 0.0, None)
        e, g = energy_s_gradient(sigma, grid, cfg)
        root = np.sqrt(sigma)
        e += mu * math.fsum(vol * sigma * root)
        g = g + 1.5 * mu * vol * root
        return e, g / scale

    res = minimize(fun, sigma0 * scale, jac=True, method="L-BFGS-B",
                   bounds=[(0.0, None)] * grid.n,
                   options=dict(maxiter=max_iter, maxfun=4 * max_iter, ftol=tol,
                                gtol=1e-14, maxcor=30))
    return np.clip(res.x / scale, 0.0, None), res


def direct_minimize_mtf(cfg: AtomConfig, grid: RadialGrid | None = None, max_iter: int = 5000,
                        tol: float = 1e-14, relaxed: bool = False) -> MinimizationResult:
    """Minimise the momentum functional directly in ``sigma = tau^(2/3)``.

    The problem is convex in ``sigma``, so the mass constraint is handled by
    its multiplier ``mu >= 0``: each inner problem is a bound-constrained
    quasi-Newton solve (L-BFGS-B, which projects onto ``sigma >= 0``), and
    ``mu`` is root-found so that the mass equals ``N``.  ``mu = 0`` is kept
    when the unconstrained minimiser already has mass ``<= N``, which for
    ``relaxed=True`` realises the constraint ``mass <= N``.
    """
    if cfg.N > cfg.Z and not relaxed:
        raise ValueError("no minimizer with mass N > Z; pass relaxed=True for mass <= N")
    if grid is None:
        grid = momentum_grid(cfg)
    k0 = momentum_scale(cfg)
    shape = (1.0 + (grid.nodes / k0) ** 2) ** -4
    sigma0 = np.cbrt(shape * cfg.N / math.fsum(shape * grid.volumes)) ** 2

    total_iter = 0
    ok = True
    messages = []

    def solve(mu, start):
        nonlocal total_iter, ok
        sigma, res = _inner_minimize(grid, cfg, mu, start, max_iter, tol)
        total_iter += res.nit
        # status 2 is a line-search stall at round-off level, not a failure
        if res.status == 1:
            ok = False
            messages.append(f"mu={mu:g}: {res.message}")
        return sigma

    def mass_of(sigma):
        return math.fsum(grid.volumes * sigma**1.5)

    mu = 0.0
    sigma = solve(0.0, sigma0)
    if mass_of(sigma) > cfg.N:
        cache = {0.0: sigma}
        hi = momentum_scale(cfg) ** 2
        while True:
            cache[hi] = solve(hi, sigma)
            if mass_of(cache[hi]) < cfg.N:
                break
            hi *= 2.0

        def excess(m):
            # reuse the bracket solves so the endpoint signs cannot flip
            if m not in cache:
                cache[m] = solve(m, cache[min(cache, key=lambda k: abs(k - m))])
            return mass_of(cache[m]) - cfg.N

        mu = brentq(excess, 0.0, hi, xtol=1e-14, rtol=1e-12)
        sigma = cache.get(mu)
        if sigma is None:
            sigma = solve(mu, cache[min(cache, key=lambda k: abs(k - mu))])
    tau = SubstitutedProfile(grid, sigma).to_profile()
    energy = energy_mtf(tau, cfg).total
    return MinimizationResult(tau, energy, mass(tau), mu, ok, total_iter, "; ".join(messages))

"""Command-line front end: ``python -m mtf <command>`` or ``mtf <command>``.

Exit codes: 0 when everything ran and passed, 1 when a verification metric
failed, 2 for usage, input or numerical infrastructure errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .io import ProfileFormatError, dumps_profile, read_profile, write_profile
from .momentum import energy_mtf
from .position import energy_tf
from .radial import AtomConfig, DomainError, GridSpecError, Space, make_grid, mass, rearrange_decreasing
from .solver import (
    ConvergenceError,
    minimizer_density,
    solve_tf_ode,
    tf_energy_closed_form,
    tf_grid,
)
from .transforms import transform_S, transform_T
from .verify import SCENARIOS, GridSpec, emit_report, run_scenario

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2

log = logging.getLogger("mtf")


class CommandError(Exception):
    """Reported on stderr with exit code 2."""


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model and grid")
    g.add_argument("--q", type=float, default=2.0, help="spin degeneracy (default 2; 6*pi^2 gives gamma = 1)")
    g.add_argument("--Z", type=float, default=1.0, help="nuclear charge")
    g.add_argument("--N", type=float, default=None, help="electron number (default Z)")
    g.add_argument("--grid-n", type=int, default=None, help="number of grid nodes")
    g.add_argument("--r-min", type=float, default=None, help="first grid node")
    g.add_argument("--r-max", type=float, default=None, help="last grid node")
    g.add_argument("--scheme", choices=("linear", "log"), default="log")
    g.add_argument("--tol", type=float, default=1e-8, help="solver tolerance on the initial slope")
    g.add_argument("--seed", type=int, default=7, help="seed for randomized scenarios")
    g.add_argument("--format", choices=("json", "text"), default="json")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="mtf", description="Momentum-space and position-space Thomas-Fermi energies, transforms and checks.",
        epilog="Model and grid flags go after the subcommand, e.g. 'mtf verify duality --grid-n 1024'.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy-tf", parents=[common], help="position-space energy of a profile CSV")
    p.add_argument("profile", type=Path)

    p = sub.add_parser("energy-mtf", parents=[common], help="momentum-space energy of a profile CSV")
    p.add_argument("profile", type=Path)
    p.add_argument("--repulsion", choices=("direct", "layercake"), default="direct")
    p.add_argument("--rearrange", action="store_true", help="rearrange a non-monotone profile first")

    p = sub.add_parser("transform", parents=[common], help="apply S (momentum->position) or T (position->momentum)")
    p.add_argument("which", choices=("s", "t"))
    p.add_argument("profile", type=Path)
    p.add_argument("-o", "--output", type=Path, default=None, help="output CSV (default stdout)")
    p.add_argument("--rearrange", action="store_true", help="rearrange a non-monotone profile first")

    p = sub.add_parser("solve", parents=[common], help="TF minimizer and its momentum image")
    p.add_argument("--out-dir", type=Path, default=Path("."), help="where rho_m.csv and tau_m.csv go")

    p = sub.add_parser("verify", parents=[common], help="run a named verification scenario or 'all'")
    p.add_argument("scenario", choices=SCENARIOS + ("all",))
    p.add_argument("--jobs", type=int, default=1, help="run scenarios in parallel processes")
    return parser


def _config(args) -> AtomConfig:
    n = args.Z if args.N is None else args.N
    try:
        return AtomConfig(Z=args.Z, N=n, q=args.q)
    except ValueError as exc:
        raise CommandError(str(exc)) from None


def _load(path: Path, space: Space, cfg: AtomConfig, rearrange: bool = False):
    try:
        p, gamma = read_profile(path)
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror}") from None
    if p.space is not space:
        raise CommandError(f"{path} holds a {p.space.value} profile, expected {space.value}")
    if abs(gamma - cfg.gamma) > 1e-12 * cfg.gamma:
        log.warning("profile was written with gamma=%r; using gamma=%r from --q", gamma, cfg.gamma)
    return rearrange_decreasing(p) if rearrange else p


def _print_record(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record, indent=2))
    else:
        width = max(len(k) for k in record)
        for k, v in record.items():
            print(f"{k:<{width}}  {v}")


def cmd_energy_tf(args) -> int:
    cfg = _config(args)
    _print_record(energy_tf(_load(args.profile, Space.POSITION, cfg), cfg).as_dict(), args.format)
    return EXIT_OK


def cmd_energy_mtf(args) -> int:
    cfg = _config(args)
    tau = _load(args.profile, Space.MOMENTUM, cfg, args.rearrange)
    _print_record(energy_mtf(tau, cfg, args.repulsion).as_dict(), args.format)
    return EXIT_OK


def cmd_transform(args) -> int:
    cfg = _config(args)
    if args.which == "t":
        out = transform_T(_load(args.profile, Space.POSITION, cfg, args.rearrange), cfg)
    else:
        out = transform_S(_load(args.profile, Space.MOMENTUM, cfg, args.rearrange), cfg)
    if args.output is None:
        sys.stdout.write(dumps_profile(out, cfg.gamma))
    else:
        write_profile(args.output, out, cfg.gamma)
    return EXIT_OK


def cmd_solve(args) -> int:
    cfg = _config(args)
    if cfg.N > cfg.Z:
        raise CommandError(
            f"N = {cfg.N:g} exceeds Z = {cfg.Z:g}: the TF functional has no minimizer with more "
            "electrons than the nuclear charge (the excess charge escapes to infinity). "
            "Use 'verify saturation' for the relaxed problem.")
    sol = solve_tf_ode(cfg, tol=args.tol)
    grid = tf_grid(sol, args.grid_n or 4096)
    if args.r_max is not None or args.r_min is not None:
        grid = make_grid(args.scheme, args.grid_n or 4096, args.r_min or grid.nodes[0],
                         args.r_max or grid.r_max)
    rho = minimizer_density(sol, cfg, grid)
    tau = transform_T(rho, cfg)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_profile(args.out_dir / "rho_m.csv", rho, cfg.gamma)
    write_profile(args.out_dir / "tau_m.csv", tau, cfg.gamma)
    summary = {
        "slope0": sol.slope0,
        "x0": sol.x0 if sol.x0 != float("inf") else None,
        "b": sol.length_scale,
        "mass": mass(rho),
        "energy_tf": energy_tf(rho, cfg).total,
        "energy_mtf": energy_mtf(tau, cfg).total,
        "energy_closed_form": tf_energy_closed_form(sol, cfg),
    }
    _print_record(summary, args.format)
    return EXIT_OK


def _grid_spec(args) -> GridSpec:
    base = GridSpec()
    return GridSpec(scheme=args.scheme, n=args.grid_n or base.n,
                    r_min=args.r_min or base.r_min, r_max=args.r_max or base.r_max)


def cmd_verify(args) -> int:
    cfg = _config(args)
    spec = _grid_spec(args)
    names = SCENARIOS if args.scenario == "all" else (args.scenario,)
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(run_scenario, names, [cfg] * len(names),
                                    [spec] * len(names), [args.seed] * len(names)))
    else:
        reports = [run_scenario(name, cfg, spec, args.seed) for name in names]
    if args.format == "json":
        docs = [json.loads(emit_report(r, "json")) for r in reports]
        print(json.dumps(docs[0] if len(docs) == 1 else docs, indent=2))
    else:
        print("\n\n".join(emit_report(r, "text") for r in reports))
    if any(r.errored for r in reports):
        return EXIT_ERROR
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


COMMANDS = {
    "energy-tf": cmd_energy_tf,
    "energy-mtf": cmd_energy_mtf,
    "transform": cmd_transform,
    "solve": cmd_solve,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (CommandError, DomainError, GridSpecError, ProfileFormatError, ConvergenceError, ValueError) as exc:
        print(f"mtf {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

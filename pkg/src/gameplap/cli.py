"""Command-line front end: ``gameplap {solve,table,consistency,paverage}``.

Exit status is 0 on success, 2 for configuration errors and 1 for numerical
failures (divergence, or an unconverged run under ``--strict``).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import analytic, bench
from .grid import write_field_csv
from .paverage import SampleSet, p_average, parse_exponent
from .solver import (INIT_STRATEGIES, ConfigError, DivergenceError, ProblemSpec, SolverConfig,
                     make_grid, max_stable_dt, solve)
from .stencil import CircleConfig, make_directions

log = logging.getLogger("gameplap")

PROBLEMS = ("aronsson", "radial", "tugofwar", "bdry-xy", "bdry-cubic", "bdry-char", "custom")
# scheme and start-up used by the benchmark that introduces each problem
PROBLEM_DEFAULTS = {
    "aronsson": ("parabolic", "perturbed-exact"),
    "radial": ("elliptic", "min-f"),
    "tugofwar": ("elliptic", "min-f"),
    "bdry-xy": ("parabolic", "multires"),
    "bdry-cubic": ("parabolic", "multires"),
    "bdry-char": ("parabolic", "multires"),
    "custom": ("parabolic", "min-f"),
}
TEST_FUNCTIONS = {
    "quadratic": lambda: analytic.quadratic(1.0, 2.0),
    "cubic": analytic.harmonic_cubic,
    "aronsson": analytic.aronsson,
    "radial": analytic.radial_paraboloid,
}

_EXPR_NAMESPACE = {name: getattr(np, name) for name in (
    "abs", "sqrt", "exp", "log", "sin", "cos", "tan", "arctan2", "hypot", "where",
    "minimum", "maximum", "sign", "pi")}


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


def _floats(text: str, count=None, flag="value"):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(flag, f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(flag, f"expected {count} numbers, got {len(vals)}")
    return vals


def _expression(text: str, flag: str):
    code = compile(text, flag, "eval")

    def func(x, y):
        return eval(code, {"__builtins__": {}}, dict(_EXPR_NAMESPACE, x=x, y=y))

    try:
        func(np.zeros(2), np.zeros(2))
    except Exception as exc:
        raise UsageError(flag, f"cannot evaluate {text!r}: {exc}") from None
    return func


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gameplap", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one Dirichlet problem")
    s.add_argument("--problem", choices=PROBLEMS, default="aronsson")
    s.add_argument("--p", default=None, help="exponent (number or 'inf'); default inf")
    s.add_argument("--n", type=int, default=41, help="nodes per side for square domains")
    s.add_argument("--nx", type=int)
    s.add_argument("--ny", type=int)
    s.add_argument("--bounds", help="xmin,xmax,ymin,ymax for --problem custom")
    s.add_argument("--f", dest="f_expr", help="source term expression in x, y (custom)")
    s.add_argument("--F", dest="F_expr", help="boundary datum expression in x, y (custom)")
    s.add_argument("--exact", dest="exact_expr", help="exact solution expression (custom)")
    s.add_argument("--dirs", type=int, default=16, help="number of directions (multiple of 4)")
    s.add_argument("--levels", type=int, default=2)
    s.add_argument("--beta", type=float, default=0.99)
    s.add_argument("--scheme", choices=("parabolic", "elliptic"),
                   help="default: parabolic for aronsson and custom, elliptic otherwise")
    s.add_argument("--dt", type=float, help="parabolic time step (default: largest stable)")
    s.add_argument("--tol", type=float, help="stopping tolerance on max |u^{n+1}-u^n| "
                   "(default 2h*1e-2)")
    s.add_argument("--probe", help="x,y point for the probe stopping rule")
    s.add_argument("--probe-tol", type=float, default=1e-6)
    s.add_argument("--init", choices=INIT_STRATEGIES,
                   help="initial iterate (default: perturbed-exact for aronsson, "
                        "multires for the bdry-* problems, min-f otherwise)")
    s.add_argument("--amplitude", type=float, default=0.2, help="perturbed-exact amplitude")
    s.add_argument("--mr-levels", type=int, help="grid levels for --init multires")
    s.add_argument("--warm-iters", type=int, default=25)
    s.add_argument("--seed", type=int, default=SolverConfig.seed)
    s.add_argument("--max-iter", type=int, default=100_000)
    s.add_argument("--out-field", type=Path, help="write x,y,u CSV here")
    s.add_argument("--out-report", type=Path, help="write the JSON run report here")
    s.add_argument("--omit-timing", action="store_true",
                   help="write wall_time as null so reruns are byte-identical")
    s.add_argument("--strict", action="store_true", help="exit 1 if max-iter is reached")

    t = sub.add_parser("table", help="rerun one of the benchmark tables (1-5)")
    t.add_argument("--table", type=int, choices=(1, 2, 3, 4, 5), required=True)
    t.add_argument("--max-nodes", type=int, help="skip rows with more nodes per side")
    t.add_argument("--directions", type=int, action="append",
                   help="restrict the aronsson table (1) to these direction counts (repeatable)")
    t.add_argument("--csv", type=Path, help="write the table as CSV here")
    t.add_argument("--field-dir", type=Path, help="write one field CSV per row here")
    t.add_argument("--omit-timing", action="store_true")

    c = sub.add_parser("consistency", help="evaluate the discrete operator on a test function")
    c.add_argument("--phi", choices=sorted(TEST_FUNCTIONS), default="quadratic")
    c.add_argument("--at", default="1,1")
    c.add_argument("--p", default="3")
    c.add_argument("--h", type=float, default=1e-3)
    c.add_argument("--dirs", type=int, default=64)
    c.add_argument("--alpha", type=float, default=1.0)

    a = sub.add_parser("paverage", help="p-average of a list of numbers")
    a.add_argument("--p", required=True)
    a.add_argument("--values", required=True, help="comma-separated numbers")
    return parser


# ----------------------------------------------------------------- commands


def _problem_from_args(args) -> ProblemSpec:
    if args.problem != "custom":
        for flag in ("bounds", "f_expr", "F_expr", "exact_expr"):
            if getattr(args, flag) is not None:
                name = {"f_expr": "f", "F_expr": "F", "exact_expr": "exact"}.get(flag, flag)
                raise UsageError(f"--{name}", "only valid with --problem custom")
    p = _exponent(args.p if args.p is not None else "inf", "--p")
    if args.problem == "radial":
        if p < 2:
            raise UsageError("--p", "the radial benchmark needs p >= 2")
        return bench.radial_problem(p).problem
    if args.problem == "custom":
        if args.bounds is None or args.F_expr is None:
            raise UsageError("--problem", "custom needs --bounds and --F")
        bounds = _floats(args.bounds, 4, "--bounds")
        f = _expression(args.f_expr, "--f") if args.f_expr else 0.0
        F = _expression(args.F_expr, "--F")
        exact = _expression(args.exact_expr, "--exact") if args.exact_expr else None
        return ProblemSpec(bounds, p, f, F, exact, "custom")
    named = bench.named_problem(args.problem)
    if args.p is not None and p != named.problem.p:
        raise UsageError("--p", f"problem {args.problem} is defined for p=inf only")
    return named.problem


def _exponent(text, flag):
    try:
        p = parse_exponent(text)
    except ValueError as exc:
        raise UsageError(flag, str(exc)) from None
    if p <= 1:
        raise UsageError(flag, "p must be > 1")
    return p


def _config_from_args(args, problem: ProblemSpec) -> SolverConfig:
    try:
        make_directions(args.dirs)
    except ValueError as exc:
        raise UsageError("--dirs", str(exc)) from None
    try:
        circle = CircleConfig(args.levels, args.beta)
    except ValueError as exc:
        flag = "--levels" if "levels" in str(exc) else "--beta"
        raise UsageError(flag, str(exc)) from None
    scheme_default, init_default = PROBLEM_DEFAULTS[args.problem]
    scheme = args.scheme or scheme_default
    if args.dt is not None and scheme == "elliptic":
        raise UsageError("--dt", "only valid with --scheme parabolic")
    nx = args.nx if args.nx is not None else args.n
    ny = args.ny if args.ny is not None else (nx if args.nx is None else None)
    if args.problem == "tugofwar" and args.nx is None and args.ny is None:
        nx, ny = 2 * args.n - 1, args.n
    probe = _floats(args.probe, 2, "--probe") if args.probe else None
    init = args.init or init_default
    if init == "perturbed-exact" and problem.exact is None:
        raise UsageError("--init", f"problem {problem.name} has no exact solution")
    cfg = SolverConfig(nx=nx, ny=ny, directions_total=args.dirs, circle=circle,
                       scheme=scheme, dt=args.dt, tol=1.0, max_iter=args.max_iter,
                       init=init, init_amplitude=args.amplitude, seed=args.seed,
                       probe=tuple(probe) if probe else None, probe_tol=args.probe_tol,
                       mr_levels=args.mr_levels, warm_iters=args.warm_iters)
    try:
        grid = make_grid(problem, cfg)
    except ConfigError as exc:
        raise UsageError("--n/--nx/--ny", str(exc)) from None
    tol = args.tol if args.tol is not None else 2 * grid.h * 1e-2
    if not tol > 0:
        raise UsageError("--tol", "must be positive")
    if args.dt is not None and args.dt > max_stable_dt(grid, circle) * (1 + 1e-12):
        raise UsageError("--dt", f"exceeds the stable bound (beta h)^2/2 = "
                                 f"{max_stable_dt(grid, circle):.6g}")
    if args.max_iter < 1:
        raise UsageError("--max-iter", "must be >= 1")
    cfg.tol = tol
    return cfg


def cmd_solve(args) -> int:
    problem = _problem_from_args(args)
    cfg = _config_from_args(args, problem)
    try:
        field, report = solve(problem, cfg)
    except ConfigError as exc:
        raise UsageError("config", str(exc)) from None
    except DivergenceError as exc:
        print(f"error: diverged: {exc}", file=sys.stderr)
        return 1
    text = report.to_json(timing=not args.omit_timing)
    if args.out_report:
        args.out_report.write_text(text + "\n")
    if args.out_field:
        write_field_csv(args.out_field, field, make_grid(problem, cfg))
    print(text)
    if args.strict and not report.converged:
        print(f"error: not converged after {report.iterations} iterations", file=sys.stderr)
        return 1
    return 0


def cmd_table(args) -> int:
    named, rows = bench.benchmark_table(args.table)
    if args.max_nodes:
        rows = [(lab, c) for lab, c in rows if max(c.shape) <= args.max_nodes]
    if args.directions:
        rows = [(lab, c) for lab, c in rows if c.directions_total in args.directions]
    if not rows:
        raise UsageError("--max-nodes", "no table rows left to run")
    table = bench.run_table(named, rows, keep_fields=args.field_dir is not None)
    timing = not args.omit_timing
    print(table.to_text(timing), end="")
    if args.csv:
        args.csv.write_text(table.to_csv(timing))
    if args.field_dir:
        args.field_dir.mkdir(parents=True, exist_ok=True)
        for (label, cfg), row in zip(rows, table.rows):
            if row.field is not None:
                safe = "".join(ch if ch.isalnum() else "_" for ch in label)
                write_field_csv(args.field_dir / f"table{args.table}_{safe}.csv", row.field,
                                make_grid(named.problem, cfg))
    return 0 if all(r.failure is None for r in table.rows) else 1


def cmd_consistency(args) -> int:
    from .solver import consistency_probe

    p = _exponent(args.p, "--p")
    at = _floats(args.at, 2, "--at")
    try:
        dirs = make_directions(args.dirs)
    except ValueError as exc:
        raise UsageError("--dirs", str(exc)) from None
    if not args.h > 0 or not args.alpha > 0:
        raise UsageError("--h/--alpha", "must be positive")
    phi = TEST_FUNCTIONS[args.phi]()
    discrete = consistency_probe(phi, at, p, args.h, dirs, args.alpha)
    exact = analytic.game_p_laplacian(phi, at, p)
    print(f"discrete {discrete:.17g}")
    print(f"exact    {exact:.17g}")
    print(f"error    {abs(discrete - exact):.6g}")
    return 0


def cmd_paverage(args) -> int:
    p = _exponent(args.p, "--p") if args.p.strip() not in ("1", "1.0") else 1.0
    try:
        sample = SampleSet(_floats(args.values, flag="--values"), p)
    except ValueError as exc:
        raise UsageError("--values", str(exc)) from None
    print(f"{p_average(sample):.17g}")
    return 0


COMMANDS = {"solve": cmd_solve, "table": cmd_table, "consistency": cmd_consistency,
            "paverage": cmd_paverage}


def parse_and_run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gameplap {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(parse_and_run())


if __name__ == "__main__":
    main()

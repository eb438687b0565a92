"""Command-line interface.

Subcommands::

    stfem run     --problem ibvp2 --disc pst --a 0 --k 0.1 --l 8 --m 8
    stfem study   --problem ibvp1 --disc sst --a 1 --k 0 --lmax 10 --mmax 10 --out surf.csv
    stfem extract --in surf.csv --curve temporal --out curve.csv
    stfem order   --in surf.csv --curve temporal --window 4

Every option may also come from a ``key = value`` file passed with
``--config``; command-line flags take precedence over the file. Relative
output paths are resolved against ``$STFEM_OUTPUT_DIR`` when it is set.

Exit status: 0 on success, 2 on usage or validation errors, 3 when a solve
fails.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from .exceptions import ConfigurationError, ExtractionError, OrderUndefinedError, SolverError, StfemError
from .params import BCTreatment, Discretization, ModelParams, Problem, RefinementLevels, RunConfig
from .study import (CURVE_KINDS, ErrorSurface, default_predicate, extract_curve, keep_all,
                    observed_order, pairwise_orders, run_cell, run_grid, sum_predicate)

EXIT_OK, EXIT_USAGE, EXIT_SOLVE = 0, 2, 3
OUTPUT_DIR_ENV = "STFEM_OUTPUT_DIR"

log = logging.getLogger("stfem")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _add_model_options(p):
    p.add_argument("--problem", default="ibvp1", choices=[x.value for x in Problem])
    p.add_argument("--disc", default="pst", choices=[x.value for x in Discretization])
    p.add_argument("--bc", default="exact", choices=[x.value for x in BCTreatment],
                   help="lower-level boundary treatment (ibvp2 only)")
    p.add_argument("--a", type=float, default=1.0, help="advection velocity")
    p.add_argument("--k", type=float, default=0.0, help="diffusion coefficient")
    p.add_argument("--t-final", type=float, default=2.0)
    p.add_argument("--no-supg", action="store_true", help="disable the SUPG term")


def _add_curve_options(p):
    p.add_argument("--in", dest="input", required=True, help="surface CSV written by 'study'")
    p.add_argument("--curve", required=True, choices=CURVE_KINDS)
    p.add_argument("--fixed", type=int, default=None,
                   help="level held fixed on spatial/temporal curves (default: finest available)")
    p.add_argument("--measure", default="e", choices=("e", "E"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stfem", description="Space-time finite elements for 1D advection-diffusion.")
    parser.add_argument("--config", help="key = value file with option defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="single simulation")
    _add_model_options(p)
    p.add_argument("--l", type=int, required=True, help="spatial refinement level")
    p.add_argument("--m", type=int, required=True, help="temporal refinement level")
    p.add_argument("--config", default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    p = sub.add_parser("study", help="convergence study over a grid of levels")
    _add_model_options(p)
    p.add_argument("--lmin", type=int, default=4)
    p.add_argument("--lmax", type=int, default=18)
    p.add_argument("--mmin", type=int, default=4)
    p.add_argument("--mmax", type=int, default=18)
    p.add_argument("--predicate", default="default",
                   help="'default' (l + m <= 30), 'all', or 'sum<=N'")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sentinel", action="store_true",
                   help="emit omitted cells with error value 1e-15")
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    p = sub.add_parser("extract", help="extract a convergence curve from a surface")
    _add_curve_options(p)
    p.add_argument("--out", default=None, help="curve CSV (default: stdout)")
    p.add_argument("--config", default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    p = sub.add_parser("order", help="observed convergence order along a curve")
    _add_curve_options(p)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--config", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    return parser


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _find_config(argv):
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def parse_args(argv):
    parser = build_parser()
    path = _find_config(argv)
    command = next((t for t in argv if t in COMMANDS), None)
    if path is not None and command is not None:
        sub = _subparser(parser, command)
        known = {a.dest: a for a in sub._actions}
        known.update({o.lstrip("-").replace("-", "_"): a for a in sub._actions for o in a.option_strings})
        for key, value in read_config_file(path).items():
            if key not in known or key in ("help", "config"):
                raise UsageError(f"unknown key {key!r} in {path} for command {command!r}")
            action = known[key]
            if isinstance(action, argparse._StoreTrueAction):
                value = value.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                try:
                    value = action.type(value)
                except ValueError as exc:
                    raise UsageError(f"{path}: bad value for {key}: {value!r}") from exc
            if action.choices is not None and value not in action.choices:
                raise UsageError(f"{path}: {key} must be one of {sorted(action.choices)}")
            sub.set_defaults(**{action.dest: value})
            action.required = False
    return parser.parse_args(argv)


def _predicate(text):
    text = text.strip().replace(" ", "")
    if text == "default":
        return default_predicate
    if text == "all":
        return keep_all
    if text.startswith("sum<="):
        try:
            return sum_predicate(int(text[5:]))
        except ValueError:
            pass
    raise ConfigurationError(f"invalid predicate {text!r}")


def _output_path(path):
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _config(args, l, m) -> RunConfig:
    return RunConfig(args.problem, args.disc, ModelParams(args.a, args.k),
                     RefinementLevels(l, m, args.t_final), args.bc, stabilized=not args.no_supg)


def _cmd_run(args, out):
    pair = run_cell(_config(args, args.l, args.m))
    print(f"e_lm={pair.e:.17g}", file=out)
    print(f"E_lm={pair.E:.17g}", file=out)
    print(f"ndof={pair.n_dof}", file=out)
    return EXIT_OK


def _cmd_study(args, out):
    if args.lmin > args.lmax or args.mmin > args.mmax:
        raise ConfigurationError("empty level range")
    if args.workers < 1:
        raise ConfigurationError("workers must be at least 1")
    template = _config(args, args.lmin, args.mmin)
    predicate = _predicate(args.predicate)
    surface = run_grid(template, predicate, range(args.lmin, args.lmax + 1),
                       range(args.mmin, args.mmax + 1), workers=args.workers)
    path = _output_path(args.out)
    surface.to_csv(path, sentinel=args.sentinel)
    failures = surface.failures()
    for (l, m), failure in failures.items():
        log.error("cell l=%d m=%d failed: %s", l, m, failure.message)
    print(f"wrote {len(surface.cells)} cells to {path}", file=out)
    return EXIT_SOLVE if failures else EXIT_OK


def _series(args):
    surface = ErrorSurface.from_csv(args.input)
    return extract_curve(surface, args.curve, fixed=args.fixed, measure=args.measure)


def _cmd_extract(args, out):
    series = _series(args)
    if args.out is None:
        print("delta,error", file=out)
        for d, e in zip(series.deltas, series.errors):
            print(f"{d:.17g},{e:.17g}", file=out)
    else:
        series.to_csv(_output_path(args.out))
    return EXIT_OK


def _cmd_order(args, out):
    series = _series(args)
    order = observed_order(series, args.window)
    pairs = pairwise_orders(series)
    print(f"order={order:.6f}", file=out)
    print("pairwise=" + ",".join(f"{p:.4f}" for p in pairs), file=out)
    return EXIT_OK


COMMANDS = {"run": _cmd_run, "study": _cmd_study, "extract": _cmd_extract, "order": _cmd_order}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except (ConfigurationError, ExtractionError, OrderUndefinedError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, StfemError) as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        return EXIT_SOLVE


if __name__ == "__main__":
    sys.exit(main())

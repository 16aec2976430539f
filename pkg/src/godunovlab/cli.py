"""Command-line benchmark harness.

    godunovlab run --case sod --scheme godunov-exact --cells 100 --cfl 0.9 --out out/sod
    godunovlab convergence --case smooth_advect --scheme ader2 --base-cells 50 --levels 4 --cfl 0.9
    godunovlab list-cases
    godunovlab list-schemes

Exit codes: 0 success, 1 numerical failure, 2 bad arguments.
"""
import argparse
import os
import sys

from .bench import builtin_suite, convergence_study, get_case, load_case_file, run_case
from .engine import RCM
from .errors import ConfigurationError, SolverError
from .output import emit_outputs
from .schemes import FluxMethod

OUT_ENV = "GODUNOVLAB_OUT"
SCHEMES = [m.value for m in FluxMethod] + [RCM]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser():
    parser = _Parser(prog="godunovlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_case(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--case", help="built-in case name (see list-cases)")
        group.add_argument("--case-file", help="JSON file with the test-case fields")
        p.add_argument("--scheme", required=True, choices=SCHEMES)
        p.add_argument("--cfl", type=float, default=0.9)

    p_run = sub.add_parser("run", help="run one case and write csv/json/svg")
    add_case(p_run)
    p_run.add_argument("--cells", type=int, required=True)
    p_run.add_argument("--t-end", type=float, default=None)
    p_run.add_argument("--out", default=None,
                       help=f"output directory (default: ${OUT_ENV} or ./out)")

    p_conv = sub.add_parser("convergence", help="grid-refinement study of the L1 density error")
    add_case(p_conv)
    p_conv.add_argument("--base-cells", type=int, required=True)
    p_conv.add_argument("--levels", type=int, default=4)

    sub.add_parser("list-cases", help="print the built-in cases")
    sub.add_parser("list-schemes", help="print the available schemes")
    return parser


def _resolve_case(args):
    if args.case_file:
        try:
            return load_case_file(args.case_file)
        except (TypeError, SolverError) as exc:
            raise ConfigurationError(f"invalid case file {args.case_file}: {exc}") from exc
    try:
        return get_case(args.case)
    except KeyError:
        raise ConfigurationError(f"unknown case {args.case!r}") from None


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-cases":
            for case in builtin_suite():
                print(f"{case.name:<14} t_end={case.t_end:<6g} gamma={case.gamma:g} "
                      f"bc={case.left_bc.value}/{case.right_bc.value}")
            return 0
        if args.command == "list-schemes":
            print("\n".join(SCHEMES))
            return 0
        case = _resolve_case(args)
        if args.command == "run":
            if args.cells < 4:
                raise ConfigurationError("--cells must be at least 4")
            field, reference, report = run_case(case, args.scheme, args.cells, args.cfl,
                                                args.t_end)
            out_dir = args.out or os.environ.get(OUT_ENV) or "out"
            paths = emit_outputs(report, field, reference, out_dir, case.gas)
            if report.errors:
                err = report.errors["rho"]
                print(f"{case.name} {args.scheme} N={args.cells}: steps={report.steps} "
                      f"L1(rho)={err['L1']:.6e} Linf(rho)={err['Linf']:.6e} "
                      f"[{report.reference}]")
            else:
                print(f"{case.name} {args.scheme} N={args.cells}: steps={report.steps} "
                      f"(no reference)")
            print(f"wrote {paths['csv']}, {paths['report']}, {paths['plot']}")
            return 0
        if args.levels < 2 or args.base_cells < 4:
            raise ConfigurationError("need --levels >= 2 and --base-cells >= 4")
        cells = [args.base_cells * 2 ** k for k in range(args.levels)]
        table = convergence_study(case, args.scheme, cells, args.cfl)
        print(table.format())
        return 0
    except (ConfigurationError, ValueError, OSError) as exc:
        print(f"godunovlab: error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"godunovlab: numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

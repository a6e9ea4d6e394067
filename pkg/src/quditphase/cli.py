"""Command line entry point: ``quditphase kernel | dist | verify``.

Exit codes: 0 success, 1 usage or parameter error, 2 verification failure,
3 degenerate input (for example an empty cat parity sector).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .combinatorics import ModelParams
from .io import distribution_json, load_sw_kernel, parse_grid, resolve_cache_dir, save_sw_kernel, write_csv
from .states import DegenerateStateError, parse_state
from .swcalc import OperatorMatrix, build_sw_kernel, quasi_distribution
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_DEGENERATE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_range(text: str) -> list[int]:
    """``3`` or ``2..5`` (inclusive)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or lo..hi range, got {text!r}") from None


def _parse_at(text: str, nvars: int) -> np.ndarray:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--at expects comma-separated reals, got {text!r}") from None
    if len(vals) != 2 * nvars:
        raise UsageError(f"--at needs {2 * nvars} numbers (x1,y1,...) for D={nvars + 1}")
    return np.array(vals[0::2]) + 1j * np.array(vals[1::2])


def _kernel_for(params: ModelParams, cache_arg):
    cache = resolve_cache_dir(cache_arg)
    if cache is None:
        return build_sw_kernel(params), None
    cached = load_sw_kernel(params, cache)
    if cached is not None:
        return cached, cache
    kernel = build_sw_kernel(params)
    save_sw_kernel(kernel, cache)
    return kernel, cache


def _matrix_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def cmd_kernel(args) -> int:
    params = ModelParams(args.D, args.N)
    kernel, cache = _kernel_for(params, args.cache_dir)
    doc = {"D": params.D, "N": params.N}
    if args.at is None:
        doc["blocks"] = kernel.levels
        doc["cache"] = str(cache) if cache else None
    else:
        z = _parse_at(args.at, params.nvars)
        m = kernel.evaluate(args.s, z)
        doc.update({"s": args.s, "z": [[float(c.real), float(c.imag)] for c in z], "matrix": _matrix_json(m)})
    print(json.dumps(doc))
    return EXIT_OK


def cmd_dist(args) -> int:
    desc = parse_state(args.state, args.D, args.N)
    if args.D is not None and args.D != desc.D or args.N is not None and args.N != desc.N:
        raise UsageError("-D/-N disagree with the state descriptor")
    params = desc.params
    rho = desc.density()
    grid = parse_grid(args.grid, params.nvars, args.section)
    F = quasi_distribution(OperatorMatrix(params, rho.matrix), args.s)
    values = F.evaluate(grid.points())
    if args.format == "csv":
        text = write_csv(grid, values)
    else:
        text = distribution_json(params, args.s, desc.to_dict(), grid, values)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    Ds = args.D or [2, 3]
    Ns = args.N or [0, 1, 2, 3]
    checks = run_suite(args.suite, Ds, Ns, args.tolerance, args.precision_bits)
    ok = all(c.passed for c in checks)
    report = {
        "suite": args.suite,
        "D": Ds,
        "N": Ns,
        "pass": ok,
        "max_residual": max((c.residual for c in checks), default=0.0),
        "checks": [c.to_dict() for c in checks],
    }
    print(json.dumps(report, indent=1))
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quditphase", description="Phase-space calculus for symmetric N-quDit systems.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    k = sub.add_parser("kernel", help="evaluate or cache the SW kernel")
    k.add_argument("-D", type=int, required=True)
    k.add_argument("-N", type=int, required=True)
    k.add_argument("-s", type=float, default=0.0)
    k.add_argument("--at", help="point as x1,y1[,x2,y2...]")
    k.add_argument("--cache-dir")
    k.set_defaults(func=cmd_kernel)

    d = sub.add_parser("dist", help="quasi-distribution on a grid")
    d.add_argument("--state", required=True, help="JSON object or inline 'type;key=value;...'")
    d.add_argument("-D", type=int)
    d.add_argument("-N", type=int)
    d.add_argument("-s", type=float, default=0.0)
    d.add_argument("--grid", help="x1:lo:hi:n[,y1:lo:hi:n...]")
    d.add_argument("--section", choices=("position", "momentum", "full"), default="full")
    d.add_argument("--format", choices=("csv", "json"), default="csv")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_dist)

    v = sub.add_parser("verify", help="run identity suites")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("-D", type=_int_range)
    v.add_argument("-N", type=_int_range)
    v.add_argument("--tolerance", type=float, default=1e-9)
    v.add_argument("--precision-bits", type=int)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DegenerateStateError as exc:
        print(f"quditphase: degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, TypeError, KeyError, json.JSONDecodeError) as exc:
        print(f"quditphase: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

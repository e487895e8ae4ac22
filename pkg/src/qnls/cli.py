"""Command-line front end: build and serialize wavefunctions, apply
operators, run verification suites, solve the box quantization conditions,
and emit evaluation grids for external plotting.

The only inter-command format is the canonical piecewise-function JSON;
grids are CSV.  Exit status is 0 iff every requested check passed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from fractions import Fraction

from . import bethe, ops, verify
from .errors import NoConvergenceError, OnWallError
from .exact import GaussianRational
from .pwfun import PWFunction, evaluate, inner_product

__all__ = ["main"]


# -- flag parsing ------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} ({exc})") from None


def _gaussian(text: str) -> GaussianRational:
    try:
        return GaussianRational.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(
            f"not a Gaussian rational: {text!r} ({exc})"
        ) from None


def _gaussian_list(text: str) -> tuple:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("need at least one spectral value")
    return tuple(_gaussian(p) for p in parts)


def _rational_list(text: str) -> tuple:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("need at least one quantum number")
    return tuple(_rational(p) for p in parts)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _params_json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"--params is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise argparse.ArgumentTypeError("--params must be a JSON object")
    return data


# -- stream helpers ----------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_text(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
        if not text.endswith("\n"):
            handle.write("\n")


def _dump_json(data) -> str:
    return json.dumps(data, indent=2)


def _load_function(path: str) -> PWFunction:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from None
    try:
        return PWFunction.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: not a function JSON ({exc})") from None


# -- subcommands -------------------------------------------------------------------

_PSI_METHODS = ("propagation", "b_minus", "b_plus")


def _cmd_psi(args) -> int:
    if args.method == "all":
        built = {m: ops.psi(args.lam, args.gamma, m) for m in _PSI_METHODS}
        reference = built["propagation"]
        for method in _PSI_METHODS[1:]:
            residual = built[method] - reference
            if not residual.is_zero():
                print(
                    f"error: construction mismatch: {method} differs from "
                    f"propagation by {json.dumps(residual.to_json())}",
                    file=sys.stderr,
                )
                return 1
        result = reference
    else:
        result = ops.psi(args.lam, args.gamma, args.method)
    _write_text(_dump_json(result.to_json()), args.out)
    return 0


def _cmd_apply(args) -> int:
    f = _load_function(args.infile)
    result = ops.apply(args.op, args.params, f)
    _write_text(_dump_json(result.to_json()), args.out)
    return 0


def _cmd_verify(args) -> int:
    names = list(verify.SUITE_NAMES) if args.suite == "all" else [args.suite]
    reports = [
        verify.run_suite(
            name, dimension=args.dimension, seed=args.seed, points=args.points
        )
        for name in names
    ]
    if args.out is not None:
        if len(reports) == 1:
            _write_text(_dump_json(reports[0].to_json()), args.out)
        else:
            os.makedirs(args.out, exist_ok=True)
            for report in reports:
                target = os.path.join(args.out, f"{report.suite_name}.json")
                _write_text(_dump_json(report.to_json()), target)
        for report in reports:
            failed = [c for c in report.checks if c.status != "exact-pass"]
            verdict = "PASS" if report.passed else f"FAIL ({len(failed)} checks)"
            print(f"{report.suite_name}: {verdict}")
    elif len(reports) == 1:
        _write_text(_dump_json(reports[0].to_json()), None)
    else:
        _write_text(
            _dump_json({r.suite_name: r.to_json() for r in reports}), None
        )
    return 0 if all(report.passed for report in reports) else 1


def _cmd_bae(args) -> int:
    roots = bethe.solve_bae(
        args.particles, args.gamma, args.length, args.quantum_numbers
    )
    _write_text(_dump_json(roots.to_json()), args.out)
    return 0


def _nudged(point, width, exact: bool):
    """Shift slot j by -j*eps so tied coordinates split deterministically
    (earlier slot larger); the offset picks a one-sided limit of the
    continuous function and never reorders distinct lattice values."""
    if exact:
        eps = Fraction(width) / 10**24
        return tuple(x - j * eps for j, x in enumerate(point, start=1))
    eps = float(width) * 1e-13
    return tuple(float(x) - j * eps for j, x in enumerate(point, start=1))


def _cmd_grid(args) -> int:
    if (args.infile is None) == (args.roots is None):
        print("error: grid needs exactly one of --in or --roots", file=sys.stderr)
        return 2
    if args.infile is not None:
        if args.xplus is None or args.xminus is None:
            print("error: grid --in requires --xplus and --xminus", file=sys.stderr)
            return 2
        f = _load_function(args.infile)
        dim = f.dimension
        xp, xm = args.xplus, args.xminus
        exact = True
        value_at = lambda x: evaluate(f, x)
    else:
        try:
            roots = bethe.BetheRoots.from_json(json.loads(_read_text(args.roots)))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"{args.roots}: not a roots JSON ({exc})") from None
        psi_sym = bethe.numeric_lieb_liniger_psi(roots.lambdas, roots.gamma)
        dim = psi_sym.dimension
        xp = float(args.xplus) if args.xplus is not None else 0.0
        xm = float(args.xminus) if args.xminus is not None else roots.L
        exact = False
        value_at = psi_sym.evaluate
    if not xm > xp:
        raise ValueError("box endpoints must satisfy xminus > xplus")
    res = args.resolution
    if res < 2:
        raise ValueError("--resolution must be at least 2 to include both faces")
    width = xm - xp
    if exact:
        axis = [xp + width * Fraction(k, res - 1) for k in range(res)]
    else:
        axis = [xp + width * (k / (res - 1)) for k in range(res)]
    rows = ["".join(f"x{j}," for j in range(1, dim + 1)) + "re,im,abs2"]
    for point in itertools.product(axis, repeat=dim):
        value = complex(value_at(_nudged(point, width, exact)))
        coords = "".join(f"{float(x)!r}," for x in point)
        rows.append(f"{coords}{value.real!r},{value.imag!r},{abs(value) ** 2!r}")
    _write_text("\n".join(rows), args.out)
    return 0


def _cmd_innerprod(args) -> int:
    left = _load_function(args.left)
    right = _load_function(args.right)
    product = inner_product(left, right, args.xplus, args.xminus)
    _write_text(_dump_json(product.to_json()), args.out)
    return 0


# -- parser ------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qnls",
        description=(
            "Exact wavefunction constructions, operator application, "
            "verification suites, quantization-condition roots, and "
            "evaluation grids."
        ),
        epilog=(
            "Set HECKE_QNLS_THREADS to cap internal parallelism. "
            "File arguments accept '-' for standard streams."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_psi = sub.add_parser(
        "psi", help="build a non-symmetric wavefunction and write its JSON"
    )
    p_psi.add_argument(
        "--lambda",
        dest="lam",
        type=_gaussian_list,
        required=True,
        metavar="L1,L2,...",
        help="comma-separated spectral values (Gaussian-rational strings)",
    )
    p_psi.add_argument("--gamma", type=_gaussian, required=True, help="coupling")
    p_psi.add_argument(
        "--method",
        choices=_PSI_METHODS + ("all",),
        default="propagation",
        help="construction route; 'all' builds every route and cross-checks",
    )
    p_psi.add_argument("--out", default=None, help="output path (default stdout)")
    p_psi.set_defaults(func=_cmd_psi)

    p_apply = sub.add_parser(
        "apply", help="apply one registered operator to a function JSON"
    )
    p_apply.add_argument("--op", choices=ops.OPERATOR_NAMES, required=True)
    p_apply.add_argument(
        "--params",
        type=_params_json,
        default={},
        help="JSON object of operator parameters (exact scalars as strings)",
    )
    p_apply.add_argument(
        "--in", dest="infile", required=True, help="input function JSON path"
    )
    p_apply.add_argument("--out", default=None, help="output path (default stdout)")
    p_apply.set_defaults(func=_cmd_apply)

    p_verify = sub.add_parser(
        "verify", help="run a randomized exact verification suite"
    )
    p_verify.add_argument(
        "--suite",
        choices=verify.SUITE_NAMES + ("all",),
        required=True,
    )
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--points", type=_positive_int, default=3)
    p_verify.add_argument(
        "-N",
        dest="dimension",
        type=_positive_int,
        default=None,
        help="particle count (default per suite)",
    )
    p_verify.add_argument(
        "--out",
        default=None,
        help="report path (directory when --suite all); default stdout",
    )
    p_verify.set_defaults(func=_cmd_verify)

    p_bae = sub.add_parser(
        "bae", help="solve the box quantization conditions, write roots JSON"
    )
    p_bae.add_argument("-N", dest="particles", type=_positive_int, required=True)
    p_bae.add_argument("--gamma", type=float, required=True, help="coupling > 0")
    p_bae.add_argument("-L", dest="length", type=float, required=True, help="box length")
    p_bae.add_argument(
        "-n",
        dest="quantum_numbers",
        type=_rational_list,
        default=None,
        metavar="N1,N2,...",
        help="quantum numbers (default: ground-state ladder)",
    )
    p_bae.add_argument("--out", default=None, help="output path (default stdout)")
    p_bae.set_defaults(func=_cmd_bae)

    p_grid = sub.add_parser(
        "grid",
        help="evaluate a function JSON or the symmetric wavefunction from "
        "roots on a uniform lattice, write CSV",
    )
    p_grid.add_argument("--in", dest="infile", default=None, help="function JSON path")
    p_grid.add_argument("--roots", default=None, help="roots JSON path")
    p_grid.add_argument("--resolution", type=_positive_int, required=True)
    p_grid.add_argument("--xplus", type=_rational, default=None, help="lower endpoint")
    p_grid.add_argument("--xminus", type=_rational, default=None, help="upper endpoint")
    p_grid.add_argument("--out", default=None, help="output path (default stdout)")
    p_grid.set_defaults(func=_cmd_grid)

    p_ip = sub.add_parser(
        "innerprod", help="exact box inner product of two function JSONs"
    )
    p_ip.add_argument("--left", required=True, help="left function JSON path")
    p_ip.add_argument("--right", required=True, help="right function JSON path")
    p_ip.add_argument("--xplus", type=_rational, required=True, help="lower endpoint")
    p_ip.add_argument("--xminus", type=_rational, required=True, help="upper endpoint")
    p_ip.add_argument("--out", default=None, help="output path (default stdout)")
    p_ip.set_defaults(func=_cmd_innerprod)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        ValueError,
        NotImplementedError,
        NoConvergenceError,
        OnWallError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: ``solve``, ``exact``, ``bounds``, ``invert``, ``simulate`` and
``table``. Usage errors exit with status 2, domain errors with status 1; both
are reported on stderr. ``table`` and ``bounds`` emit flat records as CSV
(header row, ``,`` delimiter, 17 significant digits) or JSON lines, each
probability paired with its natural logarithm so that rows at large n stay
comparable after the probabilities underflow.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

from ._util import DomainError, as_fraction, log_fraction
from .bounds import BOUND_NAMES, bound_report
from .cgf import solve_saddlepoint
from .exact import DEFAULT_CAP, eulerian_distribution
from .inversion import parseval_tail
from .quadrature import QuadratureSpec
from .simulate import run_summary

__all__ = ["main", "table_records", "RECORD_FIELDS", "thread_cap"]

PROB_FIELDS = ("exact", "sharp", "cid", "qn", "azuma", "chernoff")
RECORD_FIELDS = (
    ("n", "x", "ceil_nx")
    + PROB_FIELDS
    + ("ratio",)
    + tuple(f"log_{name}" for name in PROB_FIELDS)
    + ("error",)
)
UNDERFLOW = "underflow"


class UsageError(Exception):
    pass


def thread_cap() -> int:
    """Worker count, capped by ``DESCENT_TAILS_THREADS`` when set."""
    workers = os.cpu_count() or 1
    raw = os.environ.get("DESCENT_TAILS_THREADS")
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise UsageError(f"DESCENT_TAILS_THREADS must be an integer, got {raw!r}") from None
        if cap < 1:
            raise UsageError("DESCENT_TAILS_THREADS must be >= 1")
        workers = min(workers, cap)
    return workers


def _level(token: str) -> Fraction:
    try:
        return as_fraction(token.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {token!r}") from None


def _right_level(token: str) -> Fraction:
    x = _level(token)
    if not Fraction(1, 2) < x < 1:
        raise UsageError(f"x must lie in (1/2, 1), got {token}")
    return x


def _int_list(text: str) -> list[int]:
    try:
        out = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"not a list of integers: {text!r}") from None
    if not out:
        raise UsageError("list must be nonempty")
    if any(n < 1 for n in out):
        raise UsageError("n must be >= 1")
    return out


def _level_list(text: str) -> list[tuple[str, Fraction]]:
    out = [(tok.strip(), _right_level(tok)) for tok in text.split(",") if tok.strip()]
    if not out:
        raise UsageError("list must be nonempty")
    return out


def _prob_and_log(log_value: Optional[float]) -> tuple[object, object]:
    """A probability field and its log companion."""
    if log_value is None:
        return None, None
    if log_value == -math.inf:
        return 0.0, "-inf"
    p = math.exp(log_value) if log_value < 709 else math.inf
    if p == 0.0:
        return UNDERFLOW, log_value
    return p, log_value


def _record(n: int, x_token: str, x: Fraction, cap: int) -> dict:
    rec: dict[str, object] = dict.fromkeys(RECORD_FIELDS)
    rec.update(n=n, x=x_token, error="")
    try:
        rep = bound_report(n, x, with_exact=n <= cap, cap=cap)
    except (DomainError, ArithmeticError) as exc:
        rec["error"] = str(exc)
        return rec
    rec["ceil_nx"] = rep.ceil_nx
    logs = {name: getattr(rep, name) for name in BOUND_NAMES}
    logs["exact"] = rep.log_exact
    for name in PROB_FIELDS:
        rec[name], rec[f"log_{name}"] = _prob_and_log(logs[name])
    if rep.exact is not None and float(rep.exact) > 0:
        # correctly rounded, rather than through exp(log)
        rec["exact"] = float(rep.exact)
    if logs["exact"] is not None and logs["sharp"] is not None:
        rec["ratio"] = math.exp(logs["exact"] - logs["sharp"]) if logs["exact"] > -math.inf else 0.0
    return rec


def table_records(ns: Sequence[int], levels: Sequence[tuple[str, Fraction]], cap: int = DEFAULT_CAP,
                  workers: Optional[int] = None) -> list[dict]:
    """One record per ``(n, x)``, n-major; rows are computed in parallel."""
    jobs = [(n, tok, x) for n in ns for tok, x in levels]
    workers = thread_cap() if workers is None else workers
    with ThreadPoolExecutor(max_workers=max(1, min(workers, len(jobs)))) as pool:
        return list(pool.map(lambda job: _record(*job, cap), jobs))


def _csv_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit(records: list[dict], fmt: str, fields: Sequence[str], out) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for rec in records:
            writer.writerow([_csv_cell(rec[f]) for f in fields])
        out.write(buf.getvalue())
    else:
        for rec in records:
            out.write(json.dumps({f: rec[f] for f in fields}) + "\n")


def _approx(f: Fraction) -> str:
    return format(float(f), ".6g") if f == 0 or float(f) != 0 else f"exp({log_fraction(f):.6f})"


# subcommands

def cmd_solve(args, out) -> int:
    rp = solve_saddlepoint(_level(args.x))
    out.write(f"t_x={rp.t_x:.12g}, I={rp.rate:.12g}, sigma_sq={rp.sigma_sq:.12g}\n")
    return 0


def cmd_exact(args, out) -> int:
    dist = eulerian_distribution(args.n, args.cap)
    if args.k is not None:
        k = args.k
        count = dist.weights[k] if 0 <= k < args.n else 0
    else:
        x = _level(args.x)
        k = math.ceil(args.n * x)
        count = dist.upper_tail_count(k)
    # unreduced, so the numerator is a permutation count
    out.write(f"{count}/{dist.total} ≈ {_approx(Fraction(count, dist.total))}\n")
    return 0


def cmd_bounds(args, out) -> int:
    x = _right_level(args.x)
    rec = _record(args.n, args.x, x, args.cap)
    if args.which == "all":
        fields = RECORD_FIELDS
    else:
        fields = ("n", "x", "ceil_nx", "exact", args.which, "log_exact", f"log_{args.which}", "error")
    _emit([rec], args.format, fields, out)
    return 1 if rec["error"] else 0


def cmd_invert(args, out) -> int:
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    res = parseval_tail(args.n, _right_level(args.x), QuadratureSpec(rel_tol=args.tol))
    out.write(
        f"tail={res.value:.17g}\n"
        f"error_bar={res.error_bar:.3e} (truncation {res.truncation_error:.3e}, "
        f"quadrature {res.quadrature_error:.3e})\n"
        f"range=[0, {res.cut:.6g}] panels={res.panels}\n"
    )
    return 0


def cmd_simulate(args, out) -> int:
    grid = None
    if args.grid:
        try:
            grid = [float(tok) for tok in args.grid.split(",") if tok.strip()]
        except ValueError:
            raise UsageError(f"not a list of times: {args.grid!r}") from None
    summary = run_summary(args.n, args.paths, args.seed, grid)
    out.write(json.dumps(summary.as_dict()) + "\n")
    return 0


def cmd_table(args, out) -> int:
    records = table_records(_int_list(args.n_list), _level_list(args.x_list), cap=args.cap)
    _emit(records, args.format, RECORD_FIELDS, out)
    return 1 if any(rec["error"] for rec in records) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="descent-tails", description="Tail probabilities for permutation descents.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="saddlepoint, rate and curvature at level x")
    p.add_argument("--x", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", help="exact P(D_n = k) or P(D_n/n >= x)")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--x")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bounds", help="tail estimates at one (n, x)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--which", choices=("all",) + BOUND_NAMES, default="all")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("invert", help="tail by Fourier inversion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("simulate", help="Monte-Carlo summary of descent trajectories")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--paths", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--grid")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table", help="bound comparison over a grid of (n, x)")
    p.add_argument("--n-list", required=True)
    p.add_argument("--x-list", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"descent-tails: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ArithmeticError, RuntimeError) as exc:
        print(f"descent-tails: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``impedance-green eval | grid | selfcheck``.

Exit codes: 0 success, 1 malformed input, 2 domain error, 3 quadrature
did not converge, 4 self-check failures. Floats are written in Python's
shortest round-trip form, so files re-emit byte-identically.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DomainError, IntegrandError
from .geometry import ProblemParams
from .greens import Path, green
from .quadrature import QuadratureConfig

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_DOMAIN = 2
EXIT_NONCONVERGENCE = 3
EXIT_CHECKS_FAILED = 4

THREADS_ENV = "IMPEDANCE_GREEN_THREADS"


class MalformedInput(Exception):
    """Input that cannot be parsed; the message names the offending field."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is taken by domain errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def fmt_float(v: float) -> str:
    return repr(float(v))


def _floats(text: str, field: str) -> list:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise MalformedInput(f"--{field}: expected comma-separated numbers, got {text!r}") from None
    if not all(np.isfinite(vals)):
        raise MalformedInput(f"--{field}: values must be finite")
    return vals


def parse_complex(text: str, field: str = "s") -> complex:
    vals = _floats(text, field)
    if len(vals) != 2:
        raise MalformedInput(f"--{field}: expected 're,im', got {text!r}")
    return complex(vals[0], vals[1])


def parse_point(text: str, d: int, field: str) -> list:
    vals = _floats(text, field)
    if len(vals) != d:
        raise MalformedInput(f"--{field}: expected {d} coordinates, got {len(vals)}")
    return vals


def parse_axis(text: str, field: str = "axis") -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise MalformedInput(f"--{field}: expected 'lo:hi:n', got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise MalformedInput(f"--{field}: expected 'lo:hi:n', got {text!r}") from None
    if n < 1 or not (np.isfinite(lo) and np.isfinite(hi)):
        raise MalformedInput(f"--{field}: need finite bounds and n >= 1")
    return np.linspace(lo, hi, n) if n > 1 else np.array([lo])


def _params(args) -> ProblemParams:
    return ProblemParams(args.d, args.beta)


def _config(args) -> QuadratureConfig:
    if not args.rel_tol > 0:
        raise MalformedInput("--rel-tol: must be positive")
    return QuadratureConfig(rel_tol=args.rel_tol)


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise MalformedInput(f"{THREADS_ENV}: expected an integer, got {raw!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


# ---------------------------------------------------------------- eval

def _eval_record(ev) -> dict:
    return {"value": [float(ev.value.real), float(ev.value.imag)], "path": ev.path.value,
            "error_estimate": float(ev.error_estimate)}


EVAL_HEADER = ["re", "im", "path", "error_estimate"]


def format_eval(rec: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rec) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EVAL_HEADER)
    w.writerow([fmt_float(rec["value"][0]), fmt_float(rec["value"][1]), rec["path"],
                fmt_float(rec["error_estimate"])])
    return buf.getvalue()


def cmd_eval(args, out) -> int:
    s = parse_complex(args.s)
    x = parse_point(args.x, args.d, "x")
    y = parse_point(args.y, args.d, "y")
    params = _params(args)
    cfg = _config(args)
    ev = green(x, y, params, s, cfg, args.path)
    out.write(format_eval(_eval_record(ev), args.format))
    if not ev.converged:
        print("error: quadrature did not converge", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


# ---------------------------------------------------------------- grid

def grid_header(d: int) -> list:
    return [f"x{i + 1}" for i in range(d)] + ["re", "im", "path", "error_estimate", "status"]


def _grid_point(x, y, params, s, cfg, path, exclude):
    if exclude > 0 and float(np.linalg.norm(np.subtract(x, y))) <= exclude:
        return None, "excluded"
    try:
        ev = green(x, y, params, s, cfg, path)
    except DomainError as exc:
        return None, f"domain_error: {exc}"
    except IntegrandError as exc:
        return None, f"not_converged: {exc}"
    return ev, "ok" if ev.converged else "not_converged"


def _grid_row(x, ev, status):
    row = {"x": [float(v) for v in x], "status": status}
    if ev is None:
        row.update(value=None, path=None, error_estimate=None)
    else:
        row.update(_eval_record(ev))
    return row


def format_grid(rows, d: int, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"columns": grid_header(d), "rows": rows}, indent=None) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(grid_header(d))
    for row in rows:
        vals = [fmt_float(v) for v in row["x"]]
        if row["value"] is None:
            vals += ["", "", "", ""]
        else:
            vals += [fmt_float(row["value"][0]), fmt_float(row["value"][1]), row["path"],
                     fmt_float(row["error_estimate"])]
        w.writerow(vals + [row["status"]])
    return buf.getvalue()


def cmd_grid(args, out) -> int:
    s = parse_complex(args.s)
    y = parse_point(args.y, args.d, "y")
    params = _params(args)
    cfg = _config(args)
    if len(args.axis) != args.d:
        raise MalformedInput(f"--axis: expected {args.d} axes, got {len(args.axis)}")
    axes = [parse_axis(a) for a in args.axis]
    if axes[-1].min() <= 0:
        raise DomainError("--axis: the last axis must lie in x_d > 0")
    if not args.exclude_radius >= 0:
        raise MalformedInput("--exclude-radius: must be nonnegative")
    points = [list(p) for p in itertools.product(*axes)]  # lexicographic in grid indices
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        results = list(pool.map(
            lambda p: _grid_point(p, y, params, s, cfg, args.path, args.exclude_radius), points))
    rows = [_grid_row(p, ev, status) for p, (ev, status) in zip(points, results)]
    text = format_grid(rows, args.d, args.format)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise MalformedInput(f"--out: cannot write {args.out!r}: {exc.strerror}") from None
    else:
        out.write(text)
    statuses = [st for _, st in results]
    if any(st.startswith("domain_error") for st in statuses):
        print("error: some grid points raised domain errors", file=sys.stderr)
        return EXIT_DOMAIN
    if any(st.startswith("not_converged") for st in statuses):
        print("error: quadrature did not converge at some grid points", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


# ---------------------------------------------------------------- selfcheck

def cmd_selfcheck(args, out) -> int:
    from .verification import run_suite, write_report

    if args.report:
        parent = os.path.dirname(os.path.abspath(args.report))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            raise MalformedInput(f"--report: directory of {args.report!r} is not writable")

    def progress(rep):
        if args.verbose:
            print(f"{'PASS' if rep['pass'] else 'FAIL'} {rep['check']}", file=out)

    reports, failed, seconds = run_suite(args.suite, progress)
    if args.report:
        write_report(reports, args.report)
    n_pass = len(reports) - len(failed)
    print(f"selfcheck {args.suite}: {n_pass}/{len(reports)} checks passed in {seconds:.1f} s", file=out)
    if failed:
        print("failed checks: " + ", ".join(sorted(set(failed))), file=sys.stderr)
        return EXIT_CHECKS_FAILED
    return EXIT_OK


# ---------------------------------------------------------------- wiring

def _add_common(p):
    p.add_argument("--d", type=int, required=True, help="dimension d >= 1")
    p.add_argument("--beta", type=float, default=1.0, help="impedance beta > 0 (default 1)")
    p.add_argument("--s", required=True, help="frequency as 're,im' with Re s >= 0")
    p.add_argument("--y", required=True, help="source point, comma-separated")
    p.add_argument("--path", choices=[p.value for p in Path], default=None,
                   help="force an evaluation route")
    p.add_argument("--rel-tol", type=float, default=QuadratureConfig().rel_tol,
                   help="relative quadrature tolerance")
    p.add_argument("--format", choices=("csv", "json"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="impedance-green",
                     description="Half-space Helmholtz Green's function with impedance boundary condition.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_eval = sub.add_parser("eval", help="evaluate G(x, y) at one point")
    _add_common(p_eval)
    p_eval.add_argument("--x", required=True, help="target point, comma-separated")
    p_eval.set_defaults(func=cmd_eval)

    p_grid = sub.add_parser("grid", help="evaluate G(., y) on a tensor grid")
    _add_common(p_grid)
    p_grid.add_argument("--axis", action="append", default=[], metavar="LO:HI:N",
                        help="one per coordinate, in order")
    p_grid.add_argument("--exclude-radius", type=float, default=0.0,
                        help="points within this distance of y are skipped (status 'excluded')")
    p_grid.add_argument("--out", default=None, help="output file (default stdout)")
    p_grid.set_defaults(func=cmd_grid)

    p_check = sub.add_parser("selfcheck", help="run the verification suite")
    p_check.add_argument("suite", nargs="?", choices=("quick", "full"), default="quick")
    p_check.add_argument("--report", default=None, help="write a JSON report here")
    p_check.add_argument("-v", "--verbose", action="store_true", help="one line per check")
    p_check.set_defaults(func=cmd_selfcheck)
    return parser


_VALUE_OPTIONS = {"--s", "--x", "--y", "--axis"}


def _glue_values(argv):
    """Rewrite ``--s -1,0`` as ``--s=-1,0`` so values starting with '-' are not read as flags."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(_glue_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.func(args, out)
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except IntegrandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())

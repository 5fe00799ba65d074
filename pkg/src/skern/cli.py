"""``skern`` command line.

Exit codes: 0 success, 1 input/output problem, 2 unsupported or invalid
request, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__, elliptic, kernels, zolotarev
from .errors import DomainError, SkernError, UnsupportedCaseError
from .kernels import ProblemSpec, Restriction

EXIT_OK, EXIT_IO, EXIT_SPEC, EXIT_VERIFY = 0, 1, 2, 3
PLOT_SAMPLES = 1024
DEMO_LENGTH = 1000
DEMO_SEED = 12345
MAX_TABLE_N = 200


class InputError(Exception):
    """Malformed input file; maps to exit code 1."""


class SpecError(Exception):
    """Invalid request; maps to exit code 2."""


# ---------------------------------------------------------------------------
# helpers


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _resolve_spec(order: int, n: int, restriction: str | None) -> ProblemSpec:
    if restriction is None:
        solved = sorted(r.value for o, r in kernels.SOLVED_CELLS if o == order)
        # order 2 is solved both ways; the non-negative transform is the default
        restriction = "nonneg-ft" if "nonneg-ft" in solved else (solved[0] if solved else "nonneg-ft")
    return ProblemSpec(order, n, restriction)


def _open_output(path: str | None):
    if path in (None, "-"):
        return _StdoutWrapper()
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


class _StdoutWrapper(io.StringIO):
    def close(self):
        sys.stdout.write(self.getvalue())
        sys.stdout.flush()
        super().close()


def _write_csv(path: str | None, header: Sequence[str], rows) -> None:
    out = _open_output(path)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, (int, str)) else _fmt(v) for v in row])
    finally:
        out.close()


def kernel_record(spec: ProblemSpec) -> dict:
    u = kernels.optimal_kernel(spec)
    notes = [kernels.ORDER3_NOTE]
    if spec.order == 4:
        notes.append("order 4: symbol is the S-polynomial S_n, weights by Gauss-Chebyshev quadrature on 2n+2 nodes")
    elif spec.order == 6:
        notes.append("order 6: symbol is Zbar2_{n+3} built from the Zolotarev polynomial with c = 1")
    elif (spec.order, spec.restriction) == (2, Restriction.UNRESTRICTED):
        notes.append("order 2 unrestricted: symbol is T_{n+1}(L(x))/(1-x) normalised to 1 at x = 1")
    return {
        "order": spec.order,
        "half_width": spec.half_width,
        "restriction": spec.restriction.value,
        "constant": kernels.sharp_constant(spec),
        "weights": [float(w) for w in u.weights],
        "provenance_notes": notes,
        "tool_version": __version__,
    }


def dump_record(record: dict) -> str:
    """JSON text with every float written to 17 significant digits."""
    parts = []
    for key, value in record.items():
        if isinstance(value, float):
            text = _fmt(value)
        elif isinstance(value, list) and value and isinstance(value[0], float):
            text = "[" + ", ".join(_fmt(v) for v in value) + "]"
        else:
            text = json.dumps(value)
        parts.append(f"  {json.dumps(key)}: {text}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def read_series(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Read a ``t,value`` or ``value`` CSV; returns (t, values)."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not rows:
        raise InputError(f"{path}: empty file, expected a header row")
    header = [h.strip().lower() for h in rows[0]]
    if header == ["t", "value"]:
        width = 2
    elif header == ["value"]:
        width = 1
    else:
        raise InputError(f"{path}: line 1: header must be 't,value' or 'value', got {','.join(rows[0])!r}")
    t, vals = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width:
            raise InputError(f"{path}: line {lineno}: expected {width} column(s), got {len(row)}")
        parsed = []
        for col, cell in enumerate(row, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise InputError(f"{path}: line {lineno}, column {col}: not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise InputError(f"{path}: line {lineno}, column {col}: non-finite value {cell!r}")
            parsed.append(v)
        t.append(parsed[0] if width == 2 else float(len(vals)))
        vals.append(parsed[-1])
    if not vals:
        raise InputError(f"{path}: no data rows")
    return np.array(t), np.array(vals)


def demo_series(name: str, length: int = DEMO_LENGTH, seed: int = DEMO_SEED) -> tuple[np.ndarray, np.ndarray]:
    if name != "noisy-sine":
        raise SpecError(f"unknown demo {name!r}; available: noisy-sine")
    rng = np.random.default_rng(seed)
    t = np.arange(length, dtype=float)
    return t, np.sin(2 * np.pi * t / 250.0) + 0.3 * rng.standard_normal(length)


# ---------------------------------------------------------------------------
# commands


def cmd_kernel(args) -> int:
    spec = _resolve_spec(args.order, args.n, args.restriction)
    text = dump_record(kernel_record(spec))
    out = _open_output(args.out)
    try:
        out.write(text)
    finally:
        out.close()
    return EXIT_OK


def cmd_constant(args) -> int:
    spec = _resolve_spec(args.order, args.n, args.restriction)
    print(_fmt(kernels.sharp_constant(spec)))
    return EXIT_OK


def cmd_smooth(args) -> int:
    if (args.input is None) == (args.demo is None):
        raise SpecError("give exactly one of --in FILE or --demo noisy-sine")
    spec = _resolve_spec(args.order, args.n, args.restriction)
    t, f = read_series(args.input) if args.input else demo_series(args.demo)
    smoothed = kernels.smooth(f, kernels.optimal_kernel(spec), args.edge)
    _write_csv(args.out, ["t", "original", "smoothed"], zip(t, f, smoothed))
    return EXIT_OK


def _check_range(lo: int, hi: int, low_limit: int, high_limit: int) -> None:
    if lo > hi:
        raise SpecError(f"empty range {lo}..{hi}")
    if lo < low_limit or hi > high_limit:
        raise SpecError(f"range {lo}..{hi} outside the supported {low_limit}..{high_limit}")


def cmd_table(args) -> int:
    lo, hi = args.start, args.stop
    if args.name == "kn":
        _check_range(lo, hi, 3, MAX_TABLE_N)
        rows = []
        for n in range(lo, hi + 1):
            p = zolotarev.solve_modulus(n)
            rows.append((n, p.modulus.k, p.a, p.amp))
        _write_csv(args.out, ["n", "k_n", "a_n", "amp"], rows)
    elif args.name == "asymptotics":
        _check_range(lo, hi, 4, MAX_TABLE_N)
        k_ref = elliptic.make_modulus(0.9089).big_K
        rows = [(n, zolotarev.solve_modulus(n).amp, 4.0 * (k_ref / n) ** 4) for n in range(lo, hi + 1)]
        _write_csv(args.out, ["n", "amp", "4(K(0.9089)/n)^4"], rows)
    else:
        _check_range(lo, hi, 1, MAX_TABLE_N)
        cells = sorted(kernels.SOLVED_CELLS, key=lambda c: (c[0], c[1].value))
        if args.order is not None:
            cells = [c for c in cells if c[0] == args.order]
            if args.restriction is not None:
                cells = [c for c in cells if c[1] is Restriction.parse(args.restriction)]
            if not cells:
                _resolve_spec(args.order, lo, args.restriction)  # raises with the open-cell message
        header = ["n"] + [f"C_{o}_{r.value}" for o, r in cells]
        rows = []
        for n in range(lo, hi + 1):
            row = [n]
            for o, r in cells:
                if n > kernels.MAX_HALF_WIDTH[o]:
                    row.append("")
                else:
                    row.append(kernels.sharp_constant(ProblemSpec(o, n, r)))
            rows.append(row)
        _write_csv(args.out, header, rows)
    return EXIT_OK


def _stem_rows(spec: ProblemSpec):
    u = kernels.optimal_kernel(spec).full()
    n = spec.half_width
    return zip(range(-n, n + 1), u)


def cmd_plotdata(args) -> int:
    n = args.n
    fig = args.figure
    if fig in ("kernel4", "kernel6"):
        spec = ProblemSpec(4 if fig == "kernel4" else 6, n, Restriction.NONNEG_FT)
        _write_csv(args.out, ["m", "u"], _stem_rows(spec))
    elif fig == "chebbar":
        if n < 2:
            raise SpecError("chebbar needs n >= 2")
        c = math.cos(math.pi / n)
        extremal = (1.0 - c) / (1.0 + c) + 2.0 * np.cos(np.arange(1, n + 1) * math.pi / n) / (1.0 + c)
        extremal[0], extremal[-1] = 1.0, -1.0
        grid = np.linspace(-1.0, 1.0, PLOT_SAMPLES - n + 2)[1:-1]
        x = np.sort(np.concatenate([grid, extremal]))
        _write_csv(args.out, ["x", "y"], zip(x, kernels.chebbar(n, x)))
    elif fig == "zolotarev":
        if n < 4:
            raise SpecError("zolotarev figure needs n >= 4")
        p = zolotarev.solve_modulus(n)
        x = np.linspace(-1.0, 1.0, PLOT_SAMPLES)
        _write_csv(args.out, ["x", "y"], zip(x, zolotarev.z2_eval(p, x)))
    elif fig == "smoothing":
        spec = ProblemSpec(6, n, Restriction.NONNEG_FT)
        t, f = demo_series("noisy-sine", PLOT_SAMPLES)
        _write_csv(args.out, ["t", "original", "smoothed"], zip(t, f, kernels.smooth(f, kernels.optimal_kernel(spec))))
    else:  # argparse restricts choices; kept for direct callers
        raise SpecError(f"unknown figure {fig!r}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .suite import run_suite

    failures = 0
    total = 0
    for result in run_suite(args.suite):
        print(result.line(), flush=True)
        total += 1
        failures += not result.passed
    print(f"{total - failures}/{total} checks passed ({args.suite} suite)")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skern", description="Smoothest averaging kernels for discrete derivatives.")
    parser.add_argument("--version", action="version", version=f"skern {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec(p):
        p.add_argument("--order", type=int, required=True, help="derivative order k")
        p.add_argument("--n", type=int, required=True, help="kernel half width")
        p.add_argument("--restriction", choices=["nonneg-ft", "unrestricted"], default=None,
                       help="kernel family (default: the solved one; nonneg-ft for order 2)")

    p = sub.add_parser("kernel", help="optimal kernel as JSON")
    add_spec(p)
    p.add_argument("--out", default="-", help="output file (default stdout)")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("constant", help="sharp constant")
    add_spec(p)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("smooth", help="smooth a CSV series with an optimal kernel")
    p.add_argument("--in", dest="input", default=None, help="CSV with header 't,value' or 'value'")
    p.add_argument("--demo", choices=["noisy-sine"], default=None, help="use a synthetic series instead of --in")
    add_spec(p)
    p.add_argument("--edge", choices=["reflect", "extend", "zero"], default="reflect")
    p.add_argument("--out", default="-", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("table", help="tables of k_n, asymptotics or constants")
    p.add_argument("--name", choices=["kn", "asymptotics", "constants"], required=True)
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="stop", type=int, required=True)
    p.add_argument("--order", type=int, default=None, help="constants table: restrict to one order")
    p.add_argument("--restriction", choices=["nonneg-ft", "unrestricted"], default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("plotdata", help="curve samples for plotting")
    p.add_argument("--figure", choices=["kernel4", "kernel6", "chebbar", "zolotarev", "smoothing"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--suite", choices=["fast", "full"], default="fast")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse reports bad usage with status 2, which matches "invalid request"
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"skern: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SpecError, DomainError, UnsupportedCaseError) as exc:
        print(f"skern: error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except SkernError as exc:
        # a numerical certificate (deflation, square root, convergence) failed
        print(f"skern: verification error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

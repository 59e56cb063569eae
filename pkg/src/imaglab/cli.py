"""Command-line entry point: ``imaglab <measure|figure|verify|power|decay> [args]``.

Exit codes are 0 on success, 1 when a verification fails, 2 for usage
errors and 3 for input that is not a valid density matrix.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import itertools
import os
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import channels
from .decay import DecayFormula, decay_numeric, decay_table, verify_formula
from .errors import ImaglabError, InvalidState
from .measures import MeasureKind, measure
from .power import (POWER_FORMULAS, deimaginary_power_numeric, imaginary_power_estimate,
                    numeric_deimaginary_powers, verify_power_formula)
from .reference_outputs import OUTPUT_CASES, reproduction_error, sample_case_point
from .states import CanonicalPattern, canonical_density, check_density, maximal_imaginary_state

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INVALID_INPUT = 3

KIND_CHOICES = [k.value for k in MeasureKind]
DECAY_COLUMNS = ("dI_l1", "dI_R", "dI_r")
POWER_COLUMNS = ("D_l1", "D_R", "D_r")
CHANNEL_CHECK_POINTS = 25
CHANNEL_CHECK_TOL = 1e-12


class UsageError(Exception):
    pass


def format_value(x: float) -> str:
    """Scientific notation with 12 digits after the point and a bare exponent, e.g. ``1.5e-3``."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    mantissa, exponent = f"{x:.12e}".split("e")
    return f"{mantissa}e{int(exponent)}"


# ---------------------------------------------------------------- state specs

def _key_values(tokens) -> dict:
    ret = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or not key:
            raise UsageError(f"expected key=value, got {tok!r}")
        ret[key] = value
    return ret


def _parse_float(text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{name}={text!r} is not a number") from None


def parse_state_spec(tokens) -> np.ndarray:
    """Turn the positional tokens of ``imaglab measure`` into a density matrix.

    Accepted forms are ``plus``, ``plus2``, ``canonical A=<v>``,
    ``canonical2 A=<v> pattern=<00_11|01_10>`` and a row-major matrix literal
    such as ``[[0.5,-0.5j],[0.5j,0.5]]``.
    """
    if not tokens:
        raise UsageError("missing state spec")
    head, rest = tokens[0], list(tokens[1:])
    if head in ("plus", "plus2"):
        if rest:
            raise UsageError(f"{head} takes no arguments")
        return maximal_imaginary_state(1 if head == "plus" else 2, +1)
    if head in ("canonical", "canonical2"):
        kv = _key_values(rest)
        allowed = {"A"} if head == "canonical" else {"A", "pattern"}
        if "A" not in kv or not set(kv) <= allowed:
            raise UsageError(f"{head} expects {' '.join(sorted(allowed))} as key=value")
        A = _parse_float(kv["A"], "A")
        if head == "canonical":
            pattern = CanonicalPattern.QUBIT_01
        else:
            try:
                pattern = CanonicalPattern(kv.get("pattern", "00_11"))
            except ValueError:
                raise UsageError(f"unknown pattern {kv['pattern']!r}") from None
            if pattern is CanonicalPattern.QUBIT_01:
                raise UsageError("canonical2 needs pattern 00_11 or 01_10")
        return canonical_density(A, pattern)
    try:
        literal = ast.literal_eval(" ".join(tokens))
        m = np.array(literal, dtype=np.complex128)
    except (ValueError, SyntaxError, TypeError) as exc:
        raise UsageError(f"cannot parse state spec {' '.join(tokens)!r}: {exc}") from None
    if m.ndim != 2:
        raise UsageError(f"matrix literal must be two-dimensional, got shape {m.shape}")
    return m


# ---------------------------------------------------------------- figures

@dataclass(frozen=True)
class FigureSpec:
    """One figure's sweep: axis names, fixed parameters and how to compute a grid."""

    figure_id: str
    axes: tuple
    columns: tuple
    fixed: dict = field(default_factory=dict)
    compute: Callable = None


def _axis(grid: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, grid)


def _decay_over_A(tag: str, pattern, param: str, to_args: Callable):
    """Figures whose axes are (A, one channel parameter)."""
    def compute(grid, fixed):
        axis = _axis(grid)
        points = [to_args(**{param: float(v)}, **fixed) for v in axis]
        table = decay_table(lambda **kw: channels.build(tag, **kw), pattern, points, axis, MeasureKind)
        rows = []
        for j, a in enumerate(axis):
            for i, v in enumerate(axis):
                rows.append([a, v] + [table[k][i, j] for k in MeasureKind])
        return rows
    return compute


def _decay_at_fixed_A(tag: str, pattern, feasible: Callable = lambda p1, p2: True):
    """Figures whose axes are two channel parameters at a fixed input A."""
    def compute(grid, fixed):
        axis = _axis(grid)
        combos = [(float(a), float(b)) for a, b in itertools.product(axis, axis) if feasible(a, b)]
        points = [{"p1": a, "p2": b} for a, b in combos]
        table = decay_table(lambda **kw: channels.build(tag, **kw), pattern, points, [fixed["A"]], MeasureKind)
        return [[a, b] + [table[k][i, 0] for k in MeasureKind] for i, (a, b) in enumerate(combos)]
    return compute


def _power_grid(tag: str, names: tuple):
    def compute(grid, fixed):
        axis = _axis(grid)
        combos = [(float(a), float(b)) for a, b in itertools.product(axis, axis)]
        points = [dict(zip(names, c)) for c in combos]
        table = numeric_deimaginary_powers(tag, points, list(MeasureKind))
        return [[a, b] + [table[k][i] for k in MeasureKind] for i, (a, b) in enumerate(combos)]
    return compute


_Q = CanonicalPattern.QUBIT_01

FIGURES = {
    "fig1": FigureSpec("fig1", ("A", "p"), DECAY_COLUMNS,
                       compute=_decay_over_A("dephasing", _Q, "p", lambda p: {"p": p})),
    "fig2": FigureSpec("fig2", ("A", "p2"), DECAY_COLUMNS, {"p1": 0.5},
                       _decay_over_A("gad", _Q, "p2", lambda p2, p1: {"p1": p1, "p2": p2})),
    "fig3": FigureSpec("fig3", ("p1", "p2"), DECAY_COLUMNS, {"A": 0.0},
                       _decay_at_fixed_A("pad", _Q, lambda p1, p2: p1 + p2 <= 1.0 + 1e-12)),
    "fig4": FigureSpec("fig4", ("p1", "p2"), DECAY_COLUMNS, {"A": 0.0},
                       _decay_at_fixed_A("bf2", CanonicalPattern.TWO_QUBIT_00_11)),
    "fig5": FigureSpec("fig5", ("A", "g"), DECAY_COLUMNS,
                       compute=_decay_over_A("ad2", CanonicalPattern.TWO_QUBIT_01_10, "g",
                                             lambda g: {"g1": g, "g2": g})),
    "fig6": FigureSpec("fig6", ("g1", "g2"), POWER_COLUMNS, compute=_power_grid("pd2", ("g1", "g2"))),
    "fig7": FigureSpec("fig7", ("p1", "p2"), POWER_COLUMNS, compute=_power_grid("bf2", ("p1", "p2"))),
    "fig8": FigureSpec("fig8", ("g1", "g2"), POWER_COLUMNS, compute=_power_grid("ad2", ("g1", "g2"))),
    "fig9": FigureSpec("fig9", ("g1", "g2"), POWER_COLUMNS, compute=_power_grid("pad2", ("g1", "g2"))),
    "fig10": FigureSpec("fig10", ("p1", "p2"), POWER_COLUMNS, compute=_power_grid("dep2", ("p1", "p2"))),
}


def figure_rows(figure_id: str, grid: int = 101, **overrides) -> tuple[list, list]:
    """Header and numeric rows for one figure; the first axis varies slowest."""
    spec = FIGURES[figure_id]
    fixed = dict(spec.fixed)
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in fixed:
            raise UsageError(f"{figure_id} has no fixed parameter {key}")
        if not 0.0 <= value <= 1.0:
            raise UsageError(f"{key}={value} outside [0, 1]")
        fixed[key] = float(value)
    if grid < 2:
        raise UsageError("--grid must be at least 2")
    return list(spec.axes + spec.columns), spec.compute(grid, fixed)


def write_csv(header, rows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


# ---------------------------------------------------------------- commands

def cmd_measure(args, out) -> int:
    rho = parse_state_spec(args.state)
    try:
        check_density(rho)
        value = measure(args.kind, rho)
    except (InvalidState, ImaglabError) as exc:
        print(f"error: invalid density matrix: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    print(format_value(value), file=out)
    return EXIT_OK


def cmd_figure(args, out) -> int:
    header, rows = figure_rows(args.figure, args.grid, A=args.A, p1=args.p1)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(header, rows, fh)
    else:
        write_csv(header, rows, out)
    return EXIT_OK


def _verify_channels(seed: int, out) -> bool:
    rng = np.random.default_rng(seed)
    ok = True
    for case in OUTPUT_CASES:
        worst = max(reproduction_error(case, sample_case_point(case, rng))
                    for _ in range(CHANNEL_CHECK_POINTS))
        passed = worst <= CHANNEL_CHECK_TOL
        ok &= passed
        print(f"{case.name} {'ok' if passed else 'FAIL'} max_err={worst:.3e} "
              f"tol={CHANNEL_CHECK_TOL:g} points={CHANNEL_CHECK_POINTS}", file=out)
    return ok


def _verify_decay(out) -> bool:
    ok = True
    for formula in DecayFormula:
        report = verify_formula(formula)
        ok &= report.passed
        print(report.summary(), file=out)
    return ok


def _verify_power(out) -> bool:
    ok = True
    for formula in POWER_FORMULAS:
        report = verify_power_formula(formula)
        ok &= report.passed
        print(report.summary(), file=out)
    return ok


def cmd_verify(args, out) -> int:
    ok = True
    if args.scope in ("channels", "all"):
        ok &= _verify_channels(args.seed, out)
    if args.scope in ("decay", "all"):
        ok &= _verify_decay(out)
    if args.scope in ("power", "all"):
        ok &= _verify_power(out)
    print("verification passed" if ok else "verification FAILED", file=out)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _channel_params(tag: str, args) -> dict:
    names = channels.CATALOG[tag].params
    given = {n: getattr(args, n) for n in ("p", "p1", "p2", "g", "g1", "g2")
             if getattr(args, n, None) is not None}
    unknown = set(given) - set(names)
    if unknown:
        raise UsageError(f"{tag} takes {', '.join(names)}; got {', '.join(sorted(unknown))}")
    missing = [n for n in names if n not in given]
    if missing:
        raise UsageError(f"{tag} needs --{' --'.join(missing)}")
    return given


def cmd_power(args, out) -> int:
    if args.tag not in channels.TWO_QUBIT_TAGS:
        raise UsageError(f"{args.tag} is not a two-qubit channel")
    ch = channels.build(args.tag, **_channel_params(args.tag, args))
    if args.mode == "imag":
        est = imaginary_power_estimate(ch, args.kind, seed=args.seed, n_samples=args.samples)
    else:
        est = deimaginary_power_numeric(ch, args.kind)
    print(f"value={format_value(est.value)}", file=out)
    print(f"witness={est.argmax_witness}", file=out)
    print(f"seed={'none' if est.seed is None else est.seed}", file=out)
    return EXIT_OK


_DEFAULT_PATTERN = {"bf2": CanonicalPattern.TWO_QUBIT_00_11, "ad2": CanonicalPattern.TWO_QUBIT_01_10}


def cmd_decay(args, out) -> int:
    if args.tag not in channels.CATALOG:
        raise UsageError(f"unknown channel {args.tag}")
    ch = channels.build(args.tag, **_channel_params(args.tag, args))
    two_qubit = ch.dim_in == 4
    if args.pattern is None:
        pattern = _DEFAULT_PATTERN.get(args.tag, CanonicalPattern.TWO_QUBIT_00_11) if two_qubit \
            else CanonicalPattern.QUBIT_01
    else:
        pattern = CanonicalPattern(args.pattern)
        if (pattern is CanonicalPattern.QUBIT_01) == two_qubit:
            raise UsageError(f"pattern {args.pattern} does not fit {args.tag}")
    if not 0.0 <= args.A <= 1.0:
        raise UsageError(f"A={args.A} outside [0, 1]")
    result = decay_numeric(ch, args.kind, canonical_density(args.A, pattern))
    print(f"initial={format_value(result.initial)}", file=out)
    print(f"final={format_value(result.final)}", file=out)
    print(f"delta={format_value(result.delta)}", file=out)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_channel_flags(p):
    for name in ("p", "p1", "p2", "g", "g1", "g2"):
        p.add_argument(f"--{name}", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="imaglab", description="Imaginarity measures, channels and figure data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="evaluate a measure on a state")
    p.add_argument("state", nargs="+", help="plus | plus2 | canonical A=v | canonical2 A=v pattern=00_11 | matrix literal")
    p.add_argument("--kind", choices=KIND_CHOICES, required=True)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("figure", help="emit the data grid behind a figure as CSV")
    p.add_argument("figure", choices=list(FIGURES))
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--out", default=None)
    p.add_argument("--A", type=float, default=None, help="fixed input parameter (fig3, fig4)")
    p.add_argument("--p1", type=float, default=None, help="fixed mixing parameter (fig2)")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="check printed closed forms and matrices numerically")
    p.add_argument("scope", choices=["decay", "power", "channels", "all"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("power", help="imaginary or de-imaginary power of a two-qubit channel")
    p.add_argument("tag", choices=list(channels.CATALOG))
    _add_channel_flags(p)
    p.add_argument("--kind", choices=KIND_CHOICES, required=True)
    p.add_argument("--mode", choices=["de-imag", "imag"], default="de-imag")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("decay", help="imaginarity decay of a canonical input under one channel")
    p.add_argument("tag", choices=list(channels.CATALOG))
    _add_channel_flags(p)
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--kind", choices=KIND_CHOICES, required=True)
    p.add_argument("--pattern", choices=[c.value for c in CanonicalPattern], default=None)
    p.set_defaults(func=cmd_decay)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"imaglab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ImaglabError as exc:
        print(f"imaglab: error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except BrokenPipeError:
        # downstream reader (e.g. head) closed early; silence the flush at exit
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK


def run(argv=None) -> str:
    """Run the CLI and return what it printed; convenient for tests and notebooks."""
    buf = io.StringIO()
    main(argv, buf)
    return buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())

"""Imaginarity decay across one channel use, numerically and in closed form.

The numeric pipeline (build channel, apply, measure before and after) is the
ground truth.  Each printed closed form is registered in ``DECAY_FORMULAS``
together with the channel and canonical input it was derived for, so that
``verify_formula`` can test it against the pipeline on a lattice.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import channels
from .closed_form import sqrt0, xlog2
from .errors import OutOfRange, ParamOutOfRange
from .measures import MeasureKind, measure
from .states import CanonicalPattern, canonical_density

TOL = 1e-9
ENTROPY_TOL = 1e-8


@dataclass(frozen=True)
class DecayResult:
    initial: float
    final: float
    delta: float


def decay_numeric(channel: channels.KrausChannel, kind, rho) -> DecayResult:
    """Measure ``rho`` before and after ``channel``; ``delta`` is not clamped."""
    initial = measure(kind, rho)
    final = measure(kind, channel.apply(rho))
    return DecayResult(initial, final, initial - final)


class DecayFormula(enum.Enum):
    D_L1R = "D_L1R"
    D_r = "D_r"
    GAD_L1R = "GAD_L1R"
    GAD_r = "GAD_r"
    PAD_L1R = "PAD_L1R"
    PAD_r = "PAD_r"
    BF2_L1R = "BF2_L1R"
    BF2_r = "BF2_r"
    DUALRAIL_AD_L1R = "DUALRAIL_AD_L1R"
    DUALRAIL_AD_r = "DUALRAIL_AD_r"


# --- printed expressions ------------------------------------------------------

def _d_l1r(A, p):
    return p * math.sqrt(1 - A * A)


def _d_r(A, p):
    s = sqrt0(1 - (1 - A * A) * (1 - (p - 1) ** 2))
    return -0.5 * xlog2(1 + s) - 0.5 * xlog2(1 - s) + 1


def _gad_l1r(A, p1, p2):
    return (1 - math.sqrt(1 - p2)) * math.sqrt(1 - A * A)


def _gad_r(A, p1, p2):
    alpha = (p2 - 2 * p1 * p2 - (1 - p2) * A) ** 2 + (1 - p2) * (1 - A * A)
    s = sqrt0(alpha)
    return (-0.5 * xlog2(1 + A) - 0.5 * xlog2(1 - A)
            - 0.5 * xlog2(1 + s) - 0.5 * xlog2(1 - s)
            + 0.5 * xlog2(1 - p2 + 2 * p1 * p2 + (1 - p2) * A)
            + 0.5 * xlog2(1 + p2 - 2 * p1 * p2 - (1 - p2) * A)
            + 1)


def _pad_l1r(A, p1, p2):
    return (1 - sqrt0(1 - p1 - p2)) * math.sqrt(1 - A * A)


def _pad_r(A, p1, p2):
    beta = 1 - p2 * (1 - p2) * (1 - A) ** 2 - p1 * (1 - A * A)
    s = sqrt0(beta)
    return (-0.5 * xlog2(1 + A) - 0.5 * xlog2(1 - A)
            + 0.5 * xlog2((1 - p2) * (1 - A))
            - 0.5 * xlog2(1 + s) - 0.5 * xlog2(1 - s)
            + 0.5 * xlog2(1 + p2 + (1 - p2) * A)
            + 1)


def _bf2_l1r(A, p1, p2):
    return (1 - abs(2 * p1 - 1) - abs(2 * p2 - 1)) * math.sqrt(1 - A * A)


def _bf2_r(A, p1, p2):
    q = p1 * p2
    alpha = p1 + p2 - 2 * q
    return (-0.5 * xlog2(1 + A) - 0.5 * xlog2(1 - A)
            - xlog2(q) - xlog2(p1 - q) - xlog2(p2 - q) - xlog2(1 - p1 - p2 + q)
            + 0.5 * xlog2(1 - alpha + (p1 + p2 - 1) * A)
            + 0.5 * xlog2(alpha + (p1 - p2) * A)
            + 0.5 * xlog2(alpha + (p2 - p1) * A)
            + 0.5 * xlog2(1 - alpha - (p1 + p2 - 1) * A))


def _dualrail_l1r(A, g):
    return g * math.sqrt(1 - A * A)


def _dualrail_r(A, g):
    return (-0.5 * xlog2(1 + A) - 0.5 * xlog2(1 - A)
            - xlog2(1 - g) + g
            + 0.5 * xlog2((1 - g) * (1 + A)) + 0.5 * xlog2((1 - g) * (1 - A)))


def _bf2_sum_equals_max(p1, p2, tol=1e-12):
    a, b = abs(2 * p1 - 1), abs(2 * p2 - 1)
    return abs((a + b) - max(a, b)) <= tol


L1R = (MeasureKind.L1, MeasureKind.ROBUSTNESS)
REL = (MeasureKind.REL_ENTROPY,)


@dataclass(frozen=True)
class DecaySpec:
    """Binds one printed decay expression to the channel and input it describes.

    ``channel_args`` maps the formula's parameters to catalog build arguments.
    ``feasible`` is a hard precondition (points outside are skipped);
    ``in_verified_domain`` marks where agreement with the pipeline is expected.
    """

    formula: DecayFormula
    params: tuple
    channel_tag: str
    channel_args: Callable
    pattern: CanonicalPattern
    kinds: tuple
    evaluate: Callable
    feasible: Callable = field(default=lambda **kw: True)
    in_verified_domain: Callable = field(default=lambda **kw: True)

    @property
    def tol(self) -> float:
        return ENTROPY_TOL if MeasureKind.REL_ENTROPY in self.kinds else TOL

    def channel(self, **params) -> channels.KrausChannel:
        return channels.build(self.channel_tag, **self.channel_args(**params))


def _same(**kw):
    return kw


def _pad_feasible(p1, p2):
    return p1 + p2 <= 1.0 + 1e-15


def _dual(g):
    return {"g1": g, "g2": g}


DECAY_FORMULAS = {
    spec.formula: spec for spec in [
        DecaySpec(DecayFormula.D_L1R, ("p",), "dephasing", _same, CanonicalPattern.QUBIT_01, L1R, _d_l1r),
        DecaySpec(DecayFormula.D_r, ("p",), "dephasing", _same, CanonicalPattern.QUBIT_01, REL, _d_r),
        DecaySpec(DecayFormula.GAD_L1R, ("p1", "p2"), "gad", _same, CanonicalPattern.QUBIT_01, L1R, _gad_l1r),
        DecaySpec(DecayFormula.GAD_r, ("p1", "p2"), "gad", _same, CanonicalPattern.QUBIT_01, REL, _gad_r),
        DecaySpec(DecayFormula.PAD_L1R, ("p1", "p2"), "pad", _same, CanonicalPattern.QUBIT_01, L1R, _pad_l1r,
                  feasible=_pad_feasible),
        DecaySpec(DecayFormula.PAD_r, ("p1", "p2"), "pad", _same, CanonicalPattern.QUBIT_01, REL, _pad_r,
                  feasible=_pad_feasible),
        DecaySpec(DecayFormula.BF2_L1R, ("p1", "p2"), "bf2", _same, CanonicalPattern.TWO_QUBIT_00_11, L1R,
                  _bf2_l1r, in_verified_domain=_bf2_sum_equals_max),
        DecaySpec(DecayFormula.BF2_r, ("p1", "p2"), "bf2", _same, CanonicalPattern.TWO_QUBIT_00_11, REL, _bf2_r),
        DecaySpec(DecayFormula.DUALRAIL_AD_L1R, ("g",), "ad2", _dual, CanonicalPattern.TWO_QUBIT_01_10, L1R,
                  _dualrail_l1r),
        DecaySpec(DecayFormula.DUALRAIL_AD_r, ("g",), "ad2", _dual, CanonicalPattern.TWO_QUBIT_01_10, REL,
                  _dualrail_r),
    ]
}


def _check_inputs(spec: DecaySpec, params: dict, A: float):
    if set(params) != set(spec.params):
        raise ValueError(f"{spec.formula.value} takes parameters {spec.params}, got {tuple(params)}")
    if not 0.0 <= A <= 1.0:
        raise OutOfRange(f"A must lie in [0, 1], got {A}")
    for k, v in params.items():
        if not 0.0 <= v <= 1.0:
            raise ParamOutOfRange(f"{k}={v} outside [0, 1]")
    if not spec.feasible(**params):
        raise ParamOutOfRange(f"{spec.formula.value}: parameters {params} outside the channel's domain")


def decay_closed_form(formula, params: dict, A: float) -> float:
    """Evaluate a printed decay expression (log base 2, ``0 log 0 = 0``)."""
    spec = DECAY_FORMULAS[DecayFormula(formula)]
    params = {k: float(v) for k, v in params.items()}
    _check_inputs(spec, params, A)
    return float(spec.evaluate(A, **params))


def in_verified_domain(formula, params: dict) -> bool:
    """False where a printed formula is known to disagree with direct computation."""
    spec = DECAY_FORMULAS[DecayFormula(formula)]
    return bool(spec.in_verified_domain(**{k: float(v) for k, v in params.items()}))


@dataclass
class PointResult:
    params: dict
    kind: MeasureKind
    closed_form: float
    numeric: float
    in_domain: bool

    @property
    def deviation(self) -> float:
        return abs(self.closed_form - self.numeric)


@dataclass
class VerifyReport:
    """Outcome of comparing one closed form against the numeric pipeline on a lattice."""

    name: str
    tol: float
    points: list

    @property
    def checked(self) -> list:
        return [pt for pt in self.points if pt.in_domain]

    @property
    def flagged(self) -> list:
        return [pt for pt in self.points if not pt.in_domain]

    @property
    def max_deviation(self) -> float:
        return max((pt.deviation for pt in self.checked), default=0.0)

    @property
    def failures(self) -> list:
        return [pt for pt in self.checked if pt.deviation > self.tol]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "ok" if self.passed else "FAIL"
        line = (f"{self.name:<16} {status:<4} max_dev={self.max_deviation:.3e} tol={self.tol:.0e} "
                f"points={len(self.checked)}")
        if self.flagged:
            worst = max(pt.deviation for pt in self.flagged)
            line += f" OutsideVerifiedDomain={len(self.flagged)} (max_dev there {worst:.3e})"
        return line


def default_grid(formula, n: int = 21) -> dict:
    spec = DECAY_FORMULAS[DecayFormula(formula)]
    axis = np.linspace(0.0, 1.0, n)
    grid = {"A": axis}
    grid.update({name: axis for name in spec.params})
    return grid


def decay_table(make_channel: Callable, pattern, param_points: list, A_values, kinds) -> dict:
    """Numeric decays for every (parameter point, A) pair on the canonical input ``pattern``.

    ``make_channel(**point)`` builds the channel for one parameter point.
    Returns, per measure kind, an array of shape ``(len(param_points), len(A_values))``.
    """
    A_values = np.asarray(A_values, dtype=float)
    inputs = np.stack([canonical_density(float(a), pattern) for a in A_values])
    outputs = np.stack([make_channel(**pt).apply(inputs) for pt in param_points])
    flat = outputs.reshape((-1,) + outputs.shape[-2:])
    ret = {}
    for kind in kinds:
        initial = np.atleast_1d(measure(kind, inputs))
        final = np.atleast_1d(measure(kind, flat)).reshape(len(param_points), len(A_values))
        ret[MeasureKind(kind)] = initial[None, :] - final
    return ret


def verify_formula(formula, grid: dict | None = None) -> VerifyReport:
    """Compare a printed decay formula with the numeric pipeline on every lattice point.

    ``grid`` maps ``"A"`` and each formula parameter to a sequence of values;
    the lattice is their Cartesian product, minus infeasible points.
    """
    spec = DECAY_FORMULAS[DecayFormula(formula)]
    grid = default_grid(formula) if grid is None else grid
    A_values = [float(a) for a in grid["A"]]
    param_points = [dict(zip(spec.params, map(float, combo)))
                    for combo in itertools.product(*(grid[name] for name in spec.params))]
    param_points = [pt for pt in param_points if spec.feasible(**pt)]
    numeric = decay_table(spec.channel, spec.pattern, param_points, A_values, spec.kinds)
    points = []
    for i, pt in enumerate(param_points):
        in_domain = bool(spec.in_verified_domain(**pt))
        for j, a in enumerate(A_values):
            value = float(spec.evaluate(a, **pt))
            for kind in spec.kinds:
                points.append(PointResult({"A": a, **pt}, kind, value, float(numeric[kind][i, j]), in_domain))
    return VerifyReport(spec.formula.value, spec.tol, points)

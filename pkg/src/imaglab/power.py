"""Imaginary and de-imaginary power of two-qubit channels on separable states.

The imaginary power is a maximum over all real separable inputs; it is
estimated here by seeded sampling and is therefore a lower bound.  The
de-imaginary power maximizes over the maximal imaginary separable states,
taken as the two candidates ``|+><+|^(x)2`` and ``|-><-|^(x)2``.
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
from .decay import PointResult, VerifyReport
from .errors import ParamOutOfRange
from .measures import MeasureKind, measure
from .states import assemble_separable, maximal_imaginary_state, sample_real_separable

TOL = 1e-8

CANDIDATES = {
    "|+><+|(x)|+><+|": maximal_imaginary_state(2, +1),
    "|-><-|(x)|-><-|": maximal_imaginary_state(2, -1),
}


@dataclass(frozen=True)
class PowerEstimate:
    value: float
    argmax_witness: str
    samples_used: int
    seed: int | None = None


def _require_two_qubit(ch: channels.KrausChannel):
    if ch.dim_in != 4:
        raise ValueError(f"{ch.label} is not a two-qubit channel")


def sample_real_separable_states(seed: int, n_samples: int, max_terms: int = 4):
    """Stack of ``n_samples`` assembled real separable states plus a label for each."""
    rng = np.random.default_rng(seed)
    states, labels = [], []
    for _ in range(n_samples):
        n_terms = int(rng.integers(1, max_terms + 1))
        sub_seed = int(rng.integers(2**63 - 1))
        states.append(assemble_separable(sample_real_separable(sub_seed, n_terms)))
        labels.append(f"real separable ensemble (seed={sub_seed}, terms={n_terms})")
    return np.stack(states), labels


def imaginary_power_estimate(ch: channels.KrausChannel, kind, seed: int = 0,
                             n_samples: int = 2000) -> PowerEstimate:
    """Largest imaginarity the channel produces from ``n_samples`` sampled real separable states.

    This is a lower bound on the imaginary power, never the supremum itself.
    """
    _require_two_qubit(ch)
    states, labels = sample_real_separable_states(seed, n_samples)
    values = np.atleast_1d(measure(kind, ch.apply(states)))
    k = int(np.argmax(values))
    return PowerEstimate(max(0.0, float(values[k])), labels[k], n_samples, seed)


def deimaginary_power_numeric(ch: channels.KrausChannel, kind) -> PowerEstimate:
    _require_two_qubit(ch)
    names = list(CANDIDATES)
    rhos = np.stack([CANDIDATES[n] for n in names])
    drops = np.atleast_1d(measure(kind, rhos)) - np.atleast_1d(measure(kind, ch.apply(rhos)))
    k = int(np.argmax(drops))
    return PowerEstimate(float(drops[k]), names[k], len(names))


class PowerFormula(enum.Enum):
    PD_L1 = "PD_L1"
    PD_R = "PD_R"
    PD_r = "PD_r"
    PFBF_L1 = "PFBF_L1"
    PFBF_R = "PFBF_R"
    PFBF_r = "PFBF_r"
    ADPAD_L1 = "ADPAD_L1"
    AD_R = "AD_R"
    PAD_R = "PAD_R"
    DEP_L1 = "DEP_L1"
    DEP_R = "DEP_R"
    DEP_r = "DEP_r"
    BPF_ALL_ZERO = "BPF_ALL_ZERO"


def _pd_l1(g1, g2):
    return 2 - math.sqrt(1 - g1) - math.sqrt(1 - g2)


def _pd_r_robust(g1, g2):
    a1, a2 = math.sqrt(1 - g1), math.sqrt(1 - g2)
    return 1 - (a1 + a2 + abs(a1 - a2)) / 2


def _pd_rel(g1, g2):
    a1, a2 = math.sqrt(1 - g1), math.sqrt(1 - g2)
    a12 = a1 * a2
    return (1 + 0.5 * xlog2(1 - a12) + 0.5 * xlog2(1 + a12)
            - 0.25 * xlog2((1 - a1) * (1 - a2)) - 0.25 * xlog2((1 + a1) * (1 + a2))
            - 0.25 * xlog2((1 + a1) * (1 - a2)) - 0.25 * xlog2((1 - a1) * (1 + a2)))


def _pfbf_l1(p1, p2):
    return 4 - 2 * p1 - 2 * p2


def _pfbf_robust(p1, p2):
    return 1 - abs(p1 + p2 - 1) - abs(p1 - p2)


def _pfbf_rel(p1, p2):
    c = (2 * p1 - 1) * (2 * p2 - 1)
    return (1 - xlog2(p1 * (1 - p2)) - xlog2(p2 * (1 - p1))
            - xlog2(p1 * p2) - xlog2((1 - p1) * (1 - p2))
            + 0.5 * xlog2(1 - c) + 0.5 * xlog2(1 + c))


def _adpad_l1(g1, g2):
    return 2 - math.sqrt(1 - g1) - math.sqrt(1 - g2)


def _ad_robust(g1, g2):
    b1, b2 = 1 - g1, 1 - g2
    inner = sqrt0(b1 * b2 * (g1**2 * g2**2 + 1) + g1**2 * b2**2 + g2**2 * b1**2)
    base = b1 * (g2**2 + 1) + b2 * (g1**2 + 1)
    return 1 - 0.5 * sqrt0(base - 2 * inner) - 0.5 * sqrt0(base + 2 * inner)


def _pad_robust(g1, g2):
    b1, b2 = 1 - g1, 1 - g2
    inner = sqrt0(g2**2 * b1**2 + b1 * b2)
    base = -g1 * g2**2 - g1 + g2**2 - g2 + 2
    return 1 - 0.5 * sqrt0(base + 2 * inner) - 0.5 * sqrt0(base - 2 * inner)


def _dep_l1(p1, p2):
    return p1 + p2


def _dep_robust(p1, p2):
    return (p1 + p2 - abs(p1 - p2)) / 2


def _dep_rel(p1, p2):
    q = (1 - p1) * (1 - p2)
    return (0.5 * xlog2(1 - q) + 0.5 * xlog2(1 + q)
            - 0.25 * xlog2((2 - p1) * (2 - p2)) - 0.25 * xlog2(p1 * (2 - p2))
            - 0.25 * xlog2(p2 * (2 - p1)) - 0.25 * xlog2(p1 * p2) + 1)


def _zero(p1, p2):
    return 0.0


def _upper_half(p1, p2):
    return p1 >= 0.5 and p2 >= 0.5


@dataclass(frozen=True)
class PowerSpec:
    formula: PowerFormula
    params: tuple
    channel_tags: tuple
    kinds: tuple
    evaluate: Callable
    in_verified_domain: Callable = field(default=lambda **kw: True)


_L1, _R, _r = (MeasureKind.L1,), (MeasureKind.ROBUSTNESS,), (MeasureKind.REL_ENTROPY,)
_G, _P = ("g1", "g2"), ("p1", "p2")

POWER_FORMULAS = {
    spec.formula: spec for spec in [
        PowerSpec(PowerFormula.PD_L1, _G, ("pd2",), _L1, _pd_l1),
        PowerSpec(PowerFormula.PD_R, _G, ("pd2",), _R, _pd_r_robust),
        PowerSpec(PowerFormula.PD_r, _G, ("pd2",), _r, _pd_rel),
        PowerSpec(PowerFormula.PFBF_L1, _P, ("pf2", "bf2"), _L1, _pfbf_l1, in_verified_domain=_upper_half),
        PowerSpec(PowerFormula.PFBF_R, _P, ("pf2", "bf2"), _R, _pfbf_robust),
        PowerSpec(PowerFormula.PFBF_r, _P, ("pf2", "bf2"), _r, _pfbf_rel),
        PowerSpec(PowerFormula.ADPAD_L1, _G, ("ad2", "pad2"), _L1, _adpad_l1),
        PowerSpec(PowerFormula.AD_R, _G, ("ad2",), _R, _ad_robust),
        PowerSpec(PowerFormula.PAD_R, _G, ("pad2",), _R, _pad_robust),
        PowerSpec(PowerFormula.DEP_L1, _P, ("dep2",), _L1, _dep_l1),
        PowerSpec(PowerFormula.DEP_R, _P, ("dep2",), _R, _dep_robust),
        PowerSpec(PowerFormula.DEP_r, _P, ("dep2",), _r, _dep_rel),
        PowerSpec(PowerFormula.BPF_ALL_ZERO, _P, ("bpf2",), tuple(MeasureKind), _zero),
    ]
}


def deimaginary_power_closed_form(formula, params: dict) -> float:
    """Evaluate a printed de-imaginary power expression (log base 2, ``0 log 0 = 0``)."""
    spec = POWER_FORMULAS[PowerFormula(formula)]
    if set(params) != set(spec.params):
        raise ValueError(f"{spec.formula.value} takes parameters {spec.params}, got {tuple(params)}")
    values = {k: float(v) for k, v in params.items()}
    for k, v in values.items():
        if not 0.0 <= v <= 1.0:
            raise ParamOutOfRange(f"{k}={v} outside [0, 1]")
    return float(spec.evaluate(**values))


def power_in_verified_domain(formula, params: dict) -> bool:
    spec = POWER_FORMULAS[PowerFormula(formula)]
    return bool(spec.in_verified_domain(**{k: float(v) for k, v in params.items()}))


def numeric_deimaginary_powers(tag: str, param_points: list, kinds) -> dict:
    """De-imaginary powers for many parameter points at once, keyed by measure kind."""
    names = list(CANDIDATES)
    rhos = np.stack([CANDIDATES[n] for n in names])
    outputs = np.stack([channels.build(tag, **pt).apply(rhos) for pt in param_points])
    flat = outputs.reshape((-1, 4, 4))
    ret = {}
    for kind in kinds:
        initial = np.atleast_1d(measure(kind, rhos))
        final = np.atleast_1d(measure(kind, flat)).reshape(len(param_points), len(names))
        ret[kind] = np.max(initial[None, :] - final, axis=1)
    return ret


def default_power_grid(formula, n: int = 21) -> dict:
    spec = POWER_FORMULAS[PowerFormula(formula)]
    axis = np.linspace(0.0, 1.0, n)
    return {name: axis for name in spec.params}


def verify_power_formula(formula, grid: dict | None = None) -> VerifyReport:
    spec = POWER_FORMULAS[PowerFormula(formula)]
    grid = default_power_grid(formula) if grid is None else grid
    param_points = [dict(zip(spec.params, map(float, combo)))
                    for combo in itertools.product(*(grid[name] for name in spec.params))]
    points = []
    for tag in spec.channel_tags:
        numeric = numeric_deimaginary_powers(tag, param_points, spec.kinds)
        for i, pt in enumerate(param_points):
            value = float(spec.evaluate(**pt))
            in_domain = bool(spec.in_verified_domain(**pt))
            for kind in spec.kinds:
                points.append(PointResult({"channel": tag, **pt}, kind, value,
                                          float(numeric[kind][i]), in_domain))
    return VerifyReport(spec.formula.value, TOL, points)

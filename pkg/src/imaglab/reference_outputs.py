"""Closed-form channel outputs on the canonical inputs, written out entry by entry.

These are deliberately independent of ``channels``: each function returns
the expected matrix directly as a function of the parameters, so comparing
``build(...).apply(input)`` against it checks the Kraus catalog.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channels import build
from .states import CanonicalPattern, canonical_density, maximal_imaginary_state

I = 1j


def dephasing_out(A, p):
    w = (1 - p) * math.sqrt(1 - A * A) / 2
    return np.array([[(1 + A) / 2, -w * I], [w * I, (1 - A) / 2]])


def gad_out(A, p1, p2):
    w = math.sqrt((1 - p2) * (1 - A * A)) / 2
    d0 = (1 + p2 * (2 * p1 - 1) + A * (1 - p2)) / 2
    d1 = (1 - p2 * (2 * p1 - 1) - A * (1 - p2)) / 2
    return np.array([[d0, -w * I], [w * I, d1]])


def pad_out(A, p1, p2):
    w = math.sqrt((1 - p1 - p2) * (1 - A * A)) / 2
    return np.array([[(1 + A + p2 * (1 - A)) / 2, -w * I], [w * I, (1 - p2) * (1 - A) / 2]])


def bf2_entangled_out(A, p1, p2):
    alpha = p1 + p2 - 2 * p1 * p2
    r = math.sqrt(1 - A * A)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = (1 - alpha + (p1 + p2 - 1) * A) / 2
    m[0, 3] = (1 - p1 - p2) * r / 2 * I
    m[1, 1] = (alpha + (p1 - p2) * A) / 2
    m[1, 2] = (p2 - p1) * r / 2 * I
    m[2, 1] = (p1 - p2) * r / 2 * I
    m[2, 2] = (alpha + (p2 - p1) * A) / 2
    m[3, 0] = -(1 - p1 - p2) * r / 2 * I
    m[3, 3] = (1 - alpha - (p1 + p2 - 1) * A) / 2
    return m


def dualrail_ad_out(A, g):
    r = math.sqrt(1 - A * A)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = g
    m[1, 1] = (1 - g) * (1 + A) / 2
    m[1, 2] = -(1 - g) * r / 2 * I
    m[2, 1] = (1 - g) * r / 2 * I
    m[2, 2] = (1 - g) * (1 - A) / 2
    return m


def _pattern_out(x1, x2):
    """Shared shape of the PD/PF/BF/DEP outputs: qubit coherences scaled by ``x1`` and ``x2``."""
    x12 = x1 * x2
    return np.array([
        [1, -I * x2, -I * x1, -x12],
        [I * x2, 1, x12, -I * x1],
        [I * x1, x12, 1, -I * x2],
        [-x12, I * x1, I * x2, 1],
    ]) / 4


def pd2_out(g1, g2):
    return _pattern_out(math.sqrt(1 - g1), math.sqrt(1 - g2))


def pf2_out(p1, p2):
    return _pattern_out(2 * p1 - 1, 2 * p2 - 1)


bf2_out = pf2_out


def ad2_out(g1, g2):
    s1, s2 = math.sqrt(1 - g1), math.sqrt(1 - g2)
    return np.array([
        [1 + g1 + g2 + g1 * g2, -I * (1 + g1) * s2, -I * (1 + g2) * s1, -s1 * s2],
        [I * (1 + g1) * s2, (g1 + 1) * (1 - g2), s1 * s2, -I * (1 - g2) * s1],
        [I * (1 + g2) * s1, s1 * s2, (1 - g1) * (1 + g2), -I * (1 - g1) * s2],
        [-s1 * s2, I * (1 - g2) * s1, I * (1 - g1) * s2, (1 - g1) * (1 - g2)],
    ]) / 4


def pad2_out(g1, g2):
    s1, s2 = math.sqrt(1 - g1), math.sqrt(1 - g2)
    return np.array([
        [1 + g2, -I * s2, -I * (1 + g2) * s1, -s1 * s2],
        [I * s2, 1 - g2, s1 * s2, -I * (1 - g2) * s1],
        [I * (1 + g2) * s1, s1 * s2, 1 + g2, -I * s2],
        [-s1 * s2, I * (1 - g2) * s1, I * s2, 1 - g2],
    ]) / 4


def bpf2_out(p1, p2):
    return np.array([[1, -I, -I, -1], [I, 1, 1, -I], [I, 1, 1, -I], [-1, I, I, 1]]) / 4


def dep2_out(p1, p2):
    return _pattern_out(1 - p1, 1 - p2)


@dataclass(frozen=True)
class OutputCase:
    """One expected output: channel tag, its build arguments, the input and the matrix."""

    name: str
    channel_tag: str
    params: tuple
    uses_A: bool
    channel_args: Callable
    input_state: Callable
    expected: Callable
    feasible: Callable = lambda **kw: True


def _qubit_input(A=None, **kw):
    return canonical_density(A, CanonicalPattern.QUBIT_01)


def _plus2_input(**kw):
    return maximal_imaginary_state(2, +1)


def _same(**kw):
    return kw


OUTPUT_CASES = [
    OutputCase("dephasing", "dephasing", ("p",), True, _same, _qubit_input, dephasing_out),
    OutputCase("gad", "gad", ("p1", "p2"), True, _same, _qubit_input, gad_out),
    OutputCase("pad", "pad", ("p1", "p2"), True, _same, _qubit_input, pad_out,
               feasible=lambda p1, p2: p1 + p2 <= 1.0),
    OutputCase("bf2_entangled", "bf2", ("p1", "p2"), True, _same,
               lambda A, **kw: canonical_density(A, CanonicalPattern.TWO_QUBIT_00_11), bf2_entangled_out),
    OutputCase("dualrail_ad", "ad2", ("g",), True, lambda g: {"g1": g, "g2": g},
               lambda A, **kw: canonical_density(A, CanonicalPattern.TWO_QUBIT_01_10), dualrail_ad_out),
    OutputCase("pd2", "pd2", ("g1", "g2"), False, _same, _plus2_input, pd2_out),
    OutputCase("pf2", "pf2", ("p1", "p2"), False, _same, _plus2_input, pf2_out),
    OutputCase("bf2", "bf2", ("p1", "p2"), False, _same, _plus2_input, bf2_out),
    OutputCase("ad2", "ad2", ("g1", "g2"), False, _same, _plus2_input, ad2_out),
    OutputCase("pad2", "pad2", ("g1", "g2"), False, _same, _plus2_input, pad2_out),
    OutputCase("bpf2", "bpf2", ("p1", "p2"), False, _same, _plus2_input, bpf2_out),
    OutputCase("dep2", "dep2", ("p1", "p2"), False, _same, _plus2_input, dep2_out),
]


def sample_case_point(case: OutputCase, rng: np.random.Generator) -> dict:
    while True:
        point = {name: float(rng.uniform()) for name in case.params}
        if case.feasible(**point):
            break
    if case.uses_A:
        point["A"] = float(rng.uniform())
    return point


def reproduction_error(case: OutputCase, point: dict) -> float:
    """Largest entrywise gap between the catalog channel's output and the expected matrix."""
    params = {k: v for k, v in point.items() if k != "A"}
    ch = build(case.channel_tag, **case.channel_args(**params))
    rho = case.input_state(**point)
    return float(np.max(np.abs(ch.apply(rho) - case.expected(**point))))

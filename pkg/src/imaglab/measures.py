"""Imaginarity measures: l1-norm, robustness and relative entropy.

All measures accept a single density matrix or a stack ``(..., n, n)``.
"""
from __future__ import annotations

import enum

import numpy as np

from . import linalg

REL_ENTROPY_CLAMP = 1e-9


class MeasureKind(enum.Enum):
    L1 = "l1"
    ROBUSTNESS = "robustness"
    REL_ENTROPY = "rel-entropy"


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def measure_l1(rho):
    """Sum of ``|Im rho_ij|`` over off-diagonal entries."""
    a = np.asarray(rho)
    im = np.abs(a.imag)
    diag = np.abs(np.diagonal(a, axis1=-2, axis2=-1).imag)
    return _out(np.sum(im, axis=(-2, -1)) - np.sum(diag, axis=-1))


def measure_robustness(rho):
    """Robustness of imaginarity, ``||rho - rho^T||_1 / 2``."""
    a = linalg.as_matrix(rho)
    return _out(0.5 * np.asarray(linalg.trace_norm(a - np.swapaxes(a, -1, -2))))


def measure_rel_entropy(rho):
    """Relative entropy of imaginarity ``S(Re rho) - S(rho)`` in bits.

    Results in ``[-1e-9, 0)`` are eigensolver noise and reported as 0.
    """
    a = linalg.as_matrix(rho)
    ret = np.asarray(linalg.von_neumann_entropy(linalg.real_part(a))) - np.asarray(
        linalg.von_neumann_entropy(a))
    ret = np.where((ret < 0.0) & (ret >= -REL_ENTROPY_CLAMP), 0.0, ret)
    return _out(ret)


_DISPATCH = {
    MeasureKind.L1: measure_l1,
    MeasureKind.ROBUSTNESS: measure_robustness,
    MeasureKind.REL_ENTROPY: measure_rel_entropy,
}


def measure(kind, rho):
    return _DISPATCH[MeasureKind(kind)](rho)


def all_measures(rho) -> dict:
    return {kind: measure(kind, rho) for kind in MeasureKind}


# axiom checks; each returns the largest violation found (<= 0 means none)

def faithfulness_violation(kind, rhos, tol: float = 1e-9) -> int:
    """Count states where ``measure == 0`` disagrees with ``is_real_state`` at ``tol``."""
    rhos = np.asarray(rhos)
    vals = np.atleast_1d(measure(kind, rhos))
    real = np.max(np.abs(rhos.imag), axis=(-2, -1)) <= tol
    zero = np.abs(vals) <= tol
    return int(np.sum(real != zero))


def monotonicity_violation(kind, channel, rhos) -> float:
    rhos = np.asarray(rhos)
    before = np.atleast_1d(measure(kind, rhos))
    after = np.atleast_1d(measure(kind, channel.apply(rhos)))
    return float(np.max(after - before))


def convexity_violation(kind, weights, rhos) -> float:
    """``F(sum p_i rho_i) - sum p_i F(rho_i)``; positive values break convexity."""
    weights = np.asarray(weights, dtype=float)
    rhos = np.asarray(rhos)
    mixed = np.einsum("i,ijk->jk", weights, rhos)
    return float(measure(kind, mixed) - np.dot(weights, np.atleast_1d(measure(kind, rhos))))


def orthogonal_invariance_violation(kind, orthogonal, rhos) -> float:
    rhos = np.asarray(rhos)
    o = np.asarray(orthogonal, dtype=float)
    rotated = o @ rhos @ o.T
    return float(np.max(np.abs(np.atleast_1d(measure(kind, rotated))
                               - np.atleast_1d(measure(kind, rhos)))))

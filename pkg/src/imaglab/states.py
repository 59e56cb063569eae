"""Pure states, density operators and the canonical forms used throughout.

States are plain numpy arrays: a pure state is a 1-d complex vector, a
density operator a square complex matrix.  ``check_density`` enforces the
density-operator invariants where an entry point needs them.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidState, NotFound, NotNormalized, OutOfRange, WrongDimension

NORM_TOL = 1e-12
TRACE_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)


class CanonicalPattern(enum.Enum):
    """Basis pair that carries the canonical state ``sqrt((1+A)/2)|a> + i sqrt((1-A)/2)|b>``."""

    QUBIT_01 = "01"
    TWO_QUBIT_00_11 = "00_11"
    TWO_QUBIT_01_10 = "01_10"


_PATTERN_SLOTS = {
    CanonicalPattern.QUBIT_01: (2, 0, 1),
    CanonicalPattern.TWO_QUBIT_00_11: (4, 0, 3),
    CanonicalPattern.TWO_QUBIT_01_10: (4, 1, 2),
}


def as_pure_state(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=np.complex128)
    if v.ndim != 1 or v.size < 1:
        raise InvalidState(f"pure state must be a non-empty vector, got shape {v.shape}")
    norm = float(np.vdot(v, v).real)
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"squared norm is {norm!r}, expected 1")
    return v


def check_density(rho, tol: float = TRACE_TOL) -> np.ndarray:
    """Validate and return ``rho`` as a density operator.

    Checks Hermiticity and unit trace at ``tol`` and positivity at -1e-9.
    """
    try:
        a = linalg.as_matrix(rho)
    except ValueError as exc:
        raise InvalidState(str(exc)) from exc
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidState(f"density operator must be a square matrix, got shape {a.shape}")
    if linalg.hermitian_defect(a) > tol:
        raise InvalidState("density operator is not Hermitian")
    tr = np.trace(a)
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"density operator has trace {tr}")
    w = linalg.eigvals_hermitian(a)
    if w[-1] < -linalg.NEGATIVE_EIG_TOL:
        raise InvalidState(f"density operator has negative eigenvalue {w[-1]:.3e}")
    return a


def density_from_pure(psi) -> np.ndarray:
    v = as_pure_state(psi)
    return np.outer(v, v.conj())


def is_real_state(rho, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(np.asarray(rho).imag)) <= tol)


def canonical_A(psi) -> float:
    """``|<psi*|psi>| = |sum_j psi_j^2|`` for a qubit state; 0 is maximally imaginary, 1 real."""
    v = as_pure_state(psi)
    if v.size != 2:
        raise WrongDimension(f"canonical_A needs a qubit state, got dimension {v.size}")
    return float(min(1.0, abs(np.sum(v * v))))


def canonical_state(A: float, pattern: CanonicalPattern = CanonicalPattern.QUBIT_01) -> np.ndarray:
    if not 0.0 <= A <= 1.0:
        raise OutOfRange(f"A must lie in [0, 1], got {A}")
    pattern = CanonicalPattern(pattern)
    dim, i, j = _PATTERN_SLOTS[pattern]
    v = np.zeros(dim, dtype=np.complex128)
    v[i] = np.sqrt((1.0 + A) / 2.0)
    v[j] = 1j * np.sqrt((1.0 - A) / 2.0)
    return v


def canonical_density(A: float, pattern: CanonicalPattern = CanonicalPattern.QUBIT_01) -> np.ndarray:
    return density_from_pure(canonical_state(A, pattern))


def phase_fidelity(a, b) -> float:
    """``|<a|b>|``, the overlap of two pure states ignoring global phase."""
    return float(abs(np.vdot(a, b)))


def _orthogonal(theta, reflect: bool) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    o = np.array([[c, -s], [s, c]])
    if reflect:
        o = o @ np.diag([1.0, -1.0])
    return o


def find_canonicalizing_orthogonal(psi, n_grid: int = 10_000, tol: float = 1e-8) -> np.ndarray:
    """Find a real orthogonal 2x2 ``O`` with ``O psi`` equal to the canonical state up to phase.

    Rotations and reflections are scanned on an ``n_grid`` angle grid; the
    best cell is refined by bisection on the derivative of ``|<c|O psi>|^2``.
    Raises ``NotFound`` when the remaining distance (minimized over global
    phase) exceeds ``tol``.
    """
    v = as_pure_state(psi)
    if v.size != 2:
        raise WrongDimension(f"expected a qubit state, got dimension {v.size}")
    target = canonical_state(canonical_A(v))
    thetas = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    step = thetas[1] - thetas[0]
    c, s = np.cos(thetas), np.sin(thetas)

    best = None
    for reflect in (False, True):
        w = v * np.array([1.0, -1.0]) if reflect else v
        # rows of O(theta) applied to w
        out0 = c * w[0] - s * w[1]
        out1 = s * w[0] + c * w[1]
        overlap = np.abs(np.conj(target[0]) * out0 + np.conj(target[1]) * out1) ** 2
        k = int(np.argmax(overlap))
        theta = _refine_angle(w, target, thetas[k] - step, thetas[k] + step, thetas[k])
        o = _orthogonal(theta, reflect)
        res = _phase_aligned_distance(target, o @ v)
        if best is None or res < best[0]:
            best = (res, o)

    residual, o = best
    if residual > tol:
        raise NotFound(f"no orthogonal matrix within {tol:g}; best residual {residual:.3e}")
    return o


def _phase_aligned_distance(target, u) -> float:
    """``min_phi ||target - e^{i phi} u||``, computed directly to avoid cancellation in ``2 - 2|<t|u>|``."""
    overlap = np.vdot(u, target)
    phase = overlap / abs(overlap) if abs(overlap) > 0.0 else 1.0
    return float(np.linalg.norm(target - phase * u))


def _refine_angle(w, target, lo, hi, fallback):
    def fprime(theta):
        c, s = np.cos(theta), np.sin(theta)
        amp = np.conj(target[0]) * (c * w[0] - s * w[1]) + np.conj(target[1]) * (s * w[0] + c * w[1])
        damp = np.conj(target[0]) * (-s * w[0] - c * w[1]) + np.conj(target[1]) * (c * w[0] - s * w[1])
        return 2.0 * (np.conj(amp) * damp).real

    f_lo, f_hi = fprime(lo), fprime(hi)
    # a maximum has f' going from positive to negative
    if not (f_lo > 0.0 > f_hi):
        return fallback
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if fprime(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def maximal_imaginary_state(n_qubits: int = 1, sign: int = +1) -> np.ndarray:
    """``|+><+|`` (or ``|-><-|``) on one qubit, or its two-fold tensor power."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if n_qubits not in (1, 2):
        raise NotImplementedError("maximal imaginary states are provided for 1 or 2 qubits only")
    psi = np.array([1.0, sign * 1j]) / np.sqrt(2.0)
    rho = np.outer(psi, psi.conj())
    return rho if n_qubits == 1 else np.kron(rho, rho)


@dataclass(frozen=True)
class SeparableEnsemble:
    """Weighted product terms ``sum_i p_i rhoA_i (x) rhoB_i``."""

    weights: tuple
    rho_a: tuple
    rho_b: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if not (len(self.weights) == len(self.rho_a) == len(self.rho_b) >= 1):
            raise InvalidState("ensemble needs matching, non-empty weight and factor lists")
        if np.any(w < 0.0) or abs(w.sum() - 1.0) > 1e-12:
            raise InvalidState("ensemble weights must be non-negative and sum to 1")


def assemble_separable(ens: SeparableEnsemble) -> np.ndarray:
    return sum(p * np.kron(a, b) for p, a, b in zip(ens.weights, ens.rho_a, ens.rho_b))


def real_qubit_state(rx: float, rz: float) -> np.ndarray:
    """Qubit state with Bloch vector in the x-z plane, which is exactly the real qubit states."""
    return 0.5 * (IDENTITY_2 + rx * PAULI_X + rz * PAULI_Z)


def _random_real_qubit(rng: np.random.Generator) -> np.ndarray:
    radius = np.sqrt(rng.uniform())
    angle = rng.uniform(0.0, 2.0 * np.pi)
    return real_qubit_state(radius * np.cos(angle), radius * np.sin(angle))


def sample_real_separable(rng_seed: int, n_terms: int) -> SeparableEnsemble:
    """Deterministic random ensemble of real product states."""
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    rng = np.random.default_rng(rng_seed)
    weights = rng.dirichlet(np.ones(n_terms)) if n_terms > 1 else np.ones(1)
    weights = weights / weights.sum()
    rho_a = tuple(_random_real_qubit(rng) for _ in range(n_terms))
    rho_b = tuple(_random_real_qubit(rng) for _ in range(n_terms))
    return SeparableEnsemble(tuple(float(x) for x in weights), rho_a, rho_b)


def random_pure_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """Random density matrix ``G G^dagger / Tr`` with Gaussian ``G`` of the given rank."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_real_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim))
    rho = g @ g.T
    return (rho / np.trace(rho)).astype(np.complex128)


def random_orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Real orthogonal matrix built from sampled plane rotations and a random reflection."""
    o = np.eye(dim)
    for p in range(dim - 1):
        for q in range(p + 1, dim):
            theta = rng.uniform(0.0, 2.0 * np.pi)
            g = np.eye(dim)
            g[p, p] = g[q, q] = np.cos(theta)
            g[p, q], g[q, p] = -np.sin(theta), np.sin(theta)
            o = o @ g
    if rng.uniform() < 0.5:
        o[:, 0] *= -1.0
    return o

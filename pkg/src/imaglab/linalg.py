"""Dense complex matrix helpers and the spectral primitives used by the measures.

Every function accepts either a single matrix or a stack of matrices with
shape ``(..., n, n)``; stacks are processed in one vectorized pass, which is
what keeps the figure sweeps fast.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NegativeEigenvalue, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-12
MAX_SWEEPS = 100
OFF_DIAGONAL_TOL = 1e-14
PIVOT_FLOOR = 1e-18
ENTROPY_CLAMP = 1e-12
NEGATIVE_EIG_TOL = 1e-9


class Spectrum(NamedTuple):
    """Eigenvalues sorted descending with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a complex128 array of at least two dimensions.

    Raises ``ValueError`` for empty or non-finite input.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim < 2 or a.shape[-1] < 1 or a.shape[-2] < 1:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has NaN or infinite entries")
    return a


def _require_square(a: np.ndarray):
    if a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected a square matrix, got shape {a.shape[-2:]}")


def adjoint(m) -> np.ndarray:
    return np.conj(np.swapaxes(as_matrix(m), -1, -2))


def transpose(m) -> np.ndarray:
    return np.swapaxes(as_matrix(m), -1, -2).copy()


def conjugate(m) -> np.ndarray:
    return np.conj(as_matrix(m))


def real_part(m) -> np.ndarray:
    """Return ``(m + m^T) / 2``, the real part of a Hermitian matrix."""
    a = as_matrix(m)
    _require_square(a)
    return 0.5 * (a + np.swapaxes(a, -1, -2))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def hermitian_defect(m) -> float:
    """Largest entrywise deviation ``|m - m^dagger|``."""
    a = as_matrix(m)
    _require_square(a)
    return float(np.max(np.abs(a - np.conj(np.swapaxes(a, -1, -2)))))


def eig_hermitian(m, tol: float = HERMITIAN_TOL) -> Spectrum:
    r"""Diagonalize a Hermitian matrix (or stack) with cyclic complex Jacobi rotations.

    Each pivot :math:`a_{pq} = r e^{i\phi}` is first made real by the phase
    ``diag(1, e^{-i\phi})`` and then annihilated by a real plane rotation.
    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``1e-14 * ||m||_F``.

    Parameters:
        m: array of shape ``(..., n, n)``, Hermitian within ``tol`` per entry.
        tol: Hermiticity tolerance.

    Returns:
        Spectrum with eigenvalues in descending order.
    """
    a = as_matrix(m)
    _require_square(a)
    defect = hermitian_defect(a) if a.size else 0.0
    if defect > tol:
        raise NotHermitian(f"matrix deviates from Hermitian by {defect:.3e}")

    n = a.shape[-1]
    batch_shape = a.shape[:-2]
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    a = a.reshape((-1, n, n)).copy()
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), a.shape).copy()

    fro = np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))
    threshold = OFF_DIAGONAL_TOL * fro
    # pivots this small cannot affect convergence and would overflow tau
    negligible = PIVOT_FLOOR * fro
    off_mask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for _ in range(MAX_SWEEPS + 1):
        off = np.sqrt(np.sum(np.abs(a[:, off_mask]) ** 2, axis=-1))
        if np.all(off <= threshold):
            break
        if _ == MAX_SWEEPS:
            raise NoConvergence(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")
        for p, q in pairs:
            apq = a[:, p, q]
            r = np.abs(apq)
            active = r > negligible
            if not np.any(active):
                continue
            phase = np.where(active, apq / np.where(active, r, 1.0), 1.0)
            r_safe = np.where(active, r, 1.0)
            tau = (a[:, q, q].real - a[:, p, p].real) / (2.0 * r_safe)
            sign = np.where(tau >= 0.0, 1.0, -1.0)
            t = sign / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # U = diag(1, conj(phase)) @ [[c, s], [-s, c]]
            u00 = c.astype(np.complex128)
            u01 = s.astype(np.complex128)
            u10 = -s * np.conj(phase)
            u11 = c * np.conj(phase)

            col_p = a[:, :, p].copy()
            col_q = a[:, :, q].copy()
            a[:, :, p] = col_p * u00[:, None] + col_q * u10[:, None]
            a[:, :, q] = col_p * u01[:, None] + col_q * u11[:, None]
            row_p = a[:, p, :].copy()
            row_q = a[:, q, :].copy()
            a[:, p, :] = np.conj(u00)[:, None] * row_p + np.conj(u10)[:, None] * row_q
            a[:, q, :] = np.conj(u01)[:, None] * row_p + np.conj(u11)[:, None] * row_q
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0

            vcol_p = v[:, :, p].copy()
            vcol_q = v[:, :, q].copy()
            v[:, :, p] = vcol_p * u00[:, None] + vcol_q * u10[:, None]
            v[:, :, q] = vcol_p * u01[:, None] + vcol_q * u11[:, None]

    w = np.diagonal(a, axis1=-2, axis2=-1).real.copy()
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    return Spectrum(w.reshape(batch_shape + (n,)), v.reshape(batch_shape + (n, n)))


def eigvals_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    return eig_hermitian(m, tol).eigenvalues


def _scalar_or_array(x: np.ndarray):
    return float(x) if np.ndim(x) == 0 else x


def trace_norm(m):
    """Sum of singular values; for Hermitian input this is ``sum(|eigenvalues|)``."""
    a = as_matrix(m)
    _require_square(a)
    if hermitian_defect(a) <= HERMITIAN_TOL:
        ret = np.sum(np.abs(eigvals_hermitian(a)), axis=-1)
    else:
        gram = np.conj(np.swapaxes(a, -1, -2)) @ a
        w = eigvals_hermitian(gram, tol=np.inf)
        ret = np.sum(np.sqrt(np.maximum(w, 0.0)), axis=-1)
    return _scalar_or_array(ret)


def entropy_of_spectrum(w):
    """Shannon entropy in bits of eigenvalues ``w`` (last axis), with 0 log 0 = 0."""
    w = np.asarray(w, dtype=np.float64)
    if np.any(w < -NEGATIVE_EIG_TOL):
        raise NegativeEigenvalue(f"eigenvalue {w.min():.3e} is below -{NEGATIVE_EIG_TOL:g}")
    w = np.where(w < ENTROPY_CLAMP, 0.0, w)
    safe = np.where(w > 0.0, w, 1.0)
    return _scalar_or_array(-np.sum(w * np.log2(safe), axis=-1))


def von_neumann_entropy(rho):
    """Von Neumann entropy ``-Tr(rho log2 rho)`` in bits."""
    return entropy_of_spectrum(eigvals_hermitian(rho))

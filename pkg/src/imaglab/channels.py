"""Kraus channels and the single- and two-qubit noise catalog.

Single-qubit flip channels use ``p`` as the probability that *no* error
occurs, matching the two-qubit operators where ``K_00 = sqrt(p1 p2) I``.
Damping channels use ``g`` (gamma) for the damping probability.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, IncompleteKraus, ParamOutOfRange
from .states import IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z, is_real_state, random_real_density

COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    label: str
    kraus: tuple
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.kraus)
        if not ops:
            raise IncompleteKraus("channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops) or len(shape) != 2:
            raise DimensionMismatch("Kraus operators must be matrices of a common shape")
        if len(ops) > shape[1] ** 2:
            raise IncompleteKraus(f"{len(ops)} Kraus operators exceed dim^2 = {shape[1] ** 2}")
        object.__setattr__(self, "kraus", ops)
        defect = self.completeness_defect()
        if defect > COMPLETENESS_TOL:
            raise IncompleteKraus(f"{self.label}: sum K^dagger K deviates from I by {defect:.3e}")

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def completeness_defect(self) -> float:
        ks = np.stack(self.kraus)
        total = np.sum(np.swapaxes(ks.conj(), -1, -2) @ ks, axis=0)
        return float(np.max(np.abs(total - np.eye(self.dim_in))))

    def apply(self, rho):
        """``sum_m K_m rho K_m^dagger`` for one density matrix or a stack of them."""
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape[-2:] != (self.dim_in, self.dim_in):
            raise DimensionMismatch(
                f"{self.label} acts on dimension {self.dim_in}, got shape {rho.shape[-2:]}")
        ks = np.stack(self.kraus)
        return np.sum(ks @ rho[..., None, :, :] @ np.swapaxes(ks.conj(), -1, -2), axis=-3)

    __call__ = apply


def apply(ch: KrausChannel, rho):
    return ch.apply(rho)


def tensor_channel(a: KrausChannel, b: KrausChannel, label: str | None = None) -> KrausChannel:
    params = {f"a.{k}": v for k, v in a.params.items()}
    params.update({f"b.{k}": v for k, v in b.params.items()})
    ka, kb = np.stack(a.kraus), np.stack(b.kraus)
    # all pairwise Kronecker products in one einsum, ordered a-major like np.kron loops
    prod = np.einsum("aij,bkl->abikjl", ka, kb)
    n_out, n_in = ka.shape[1] * kb.shape[1], ka.shape[2] * kb.shape[2]
    ops = tuple(prod.reshape(-1, n_out, n_in))
    return KrausChannel(label or f"{a.label}(x){b.label}", ops, params)


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel("identity", (np.eye(dim),))


# --- single-qubit catalog -------------------------------------------------

def dephasing(p):
    return [np.sqrt(1 - p / 2) * IDENTITY_2, np.sqrt(p / 2) * PAULI_Z]


def generalized_amplitude_damping(p1, p2):
    return [
        np.sqrt(p1) * np.diag([1.0, np.sqrt(1 - p2)]),
        np.sqrt(p1) * np.array([[0.0, np.sqrt(p2)], [0.0, 0.0]]),
        np.sqrt(1 - p1) * np.diag([np.sqrt(1 - p2), 1.0]),
        np.sqrt(1 - p1) * np.array([[0.0, 0.0], [np.sqrt(p2), 0.0]]),
    ]


def phase_amplitude_damping(p1, p2):
    # phase-loss operator is sqrt(p1)|1><1|; with sqrt(p1) Z the set is not trace preserving
    return [
        np.diag([1.0, np.sqrt(max(0.0, 1 - p1 - p2))]),
        np.array([[0.0, np.sqrt(p2)], [0.0, 0.0]]),
        np.diag([0.0, np.sqrt(p1)]),
    ]


def bit_flip(p):
    return [np.sqrt(p) * IDENTITY_2, np.sqrt(1 - p) * PAULI_X]


def phase_flip(p):
    return [np.sqrt(p) * IDENTITY_2, np.sqrt(1 - p) * PAULI_Z]


def bit_phase_flip(p):
    return [np.sqrt(p) * IDENTITY_2, np.sqrt(1 - p) * PAULI_Y]


def phase_damping(g):
    return [np.diag([1.0, np.sqrt(1 - g)]), np.diag([0.0, np.sqrt(g)])]


def amplitude_damping(g):
    return [np.diag([1.0, np.sqrt(1 - g)]), np.array([[0.0, np.sqrt(g)], [0.0, 0.0]])]


def depolarizing(p):
    return [np.sqrt(1 - 3 * p / 4) * IDENTITY_2,
            np.sqrt(p / 4) * PAULI_X, np.sqrt(p / 4) * PAULI_Y, np.sqrt(p / 4) * PAULI_Z]


# --- two-qubit catalog, written out entry by entry ---------------------------

def _damping_k00(g1, g2):
    return np.diag([1.0, np.sqrt(1 - g2), np.sqrt(1 - g1), np.sqrt((1 - g1) * (1 - g2))])


def phase_damping_2q(g1, g2):
    return [
        _damping_k00(g1, g2),
        np.diag([0.0, np.sqrt(g2), 0.0, np.sqrt(g2 * (1 - g1))]),
        np.diag([0.0, 0.0, np.sqrt(g1), np.sqrt(g1 * (1 - g2))]),
        np.diag([0.0, 0.0, 0.0, np.sqrt(g1 * g2)]),
    ]


def phase_flip_2q(p1, p2):
    q1, q2 = 1 - p1, 1 - p2
    return [
        np.sqrt(p1 * p2) * np.eye(4),
        np.sqrt(p1 * q2) * np.diag([1.0, -1.0, 1.0, -1.0]),
        np.sqrt(q1 * p2) * np.diag([1.0, 1.0, -1.0, -1.0]),
        np.sqrt(q1 * q2) * np.diag([1.0, -1.0, -1.0, 1.0]),
    ]


def bit_flip_2q(p1, p2):
    q1, q2 = 1 - p1, 1 - p2
    k01 = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float)
    k10 = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float)
    k11 = np.fliplr(np.eye(4))
    return [np.sqrt(p1 * p2) * np.eye(4), np.sqrt(p1 * q2) * k01,
            np.sqrt(q1 * p2) * k10, np.sqrt(q1 * q2) * k11]


def amplitude_damping_2q(g1, g2):
    k01 = np.zeros((4, 4))
    k01[0, 1] = np.sqrt(g2)
    k01[2, 3] = np.sqrt(g2 * (1 - g1))
    k10 = np.zeros((4, 4))
    k10[0, 2] = np.sqrt(g1)
    k10[1, 3] = np.sqrt(g1 * (1 - g2))
    k11 = np.zeros((4, 4))
    k11[0, 3] = np.sqrt(g1 * g2)
    return [_damping_k00(g1, g2), k01, k10, k11]


def phase_amplitude_damping_2q(g1, g2):
    k01 = np.zeros((4, 4))
    k01[0, 1] = np.sqrt(g2)
    k01[2, 3] = np.sqrt(g2 * (1 - g1))
    k10 = np.diag([0.0, 0.0, np.sqrt(g1), np.sqrt(g1 * (1 - g2))])
    k11 = np.zeros((4, 4))
    k11[2, 3] = np.sqrt(g1 * g2)
    return [_damping_k00(g1, g2), k01, k10, k11]


def bit_phase_flip_2q(p1, p2):
    q1, q2 = 1 - p1, 1 - p2
    k01 = 1j * np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
    k10 = 1j * np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float)
    k11 = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float)
    return [np.sqrt(p1 * p2) * np.eye(4), np.sqrt(p1 * q2) * k01,
            np.sqrt(q1 * p2) * k10, np.sqrt(q1 * q2) * k11]


@dataclass(frozen=True)
class CatalogEntry:
    params: tuple
    n_qubits: int
    kraus: Callable


CATALOG = {
    "dephasing": CatalogEntry(("p",), 1, dephasing),
    "gad": CatalogEntry(("p1", "p2"), 1, generalized_amplitude_damping),
    "pad": CatalogEntry(("p1", "p2"), 1, phase_amplitude_damping),
    "bitflip": CatalogEntry(("p",), 1, bit_flip),
    "phaseflip": CatalogEntry(("p",), 1, phase_flip),
    "bitphaseflip": CatalogEntry(("p",), 1, bit_phase_flip),
    "phasedamping": CatalogEntry(("g",), 1, phase_damping),
    "amplitudedamping": CatalogEntry(("g",), 1, amplitude_damping),
    "depolarizing": CatalogEntry(("p",), 1, depolarizing),
    "pd2": CatalogEntry(("g1", "g2"), 2, phase_damping_2q),
    "pf2": CatalogEntry(("p1", "p2"), 2, phase_flip_2q),
    "bf2": CatalogEntry(("p1", "p2"), 2, bit_flip_2q),
    "ad2": CatalogEntry(("g1", "g2"), 2, amplitude_damping_2q),
    "pad2": CatalogEntry(("g1", "g2"), 2, phase_amplitude_damping_2q),
    "bpf2": CatalogEntry(("p1", "p2"), 2, bit_phase_flip_2q),
    "dep2": CatalogEntry(("p1", "p2"), 2, None),
}

TWO_QUBIT_TAGS = tuple(tag for tag, e in CATALOG.items() if e.n_qubits == 2)


def build(tag: str, **params) -> KrausChannel:
    """Build a catalog channel, e.g. ``build("gad", p1=0.5, p2=0.2)``.

    All parameters must lie in [0, 1]; ``pad`` also needs ``p1 + p2 <= 1``.
    """
    try:
        entry = CATALOG[tag]
    except KeyError:
        raise ValueError(f"unknown channel {tag!r}; choose from {sorted(CATALOG)}") from None
    if set(params) != set(entry.params):
        raise ValueError(f"{tag} takes parameters {entry.params}, got {tuple(params)}")
    values = {k: float(params[k]) for k in entry.params}
    for k, v in values.items():
        if not 0.0 <= v <= 1.0:
            raise ParamOutOfRange(f"{tag}: {k}={v} outside [0, 1]")
    if tag == "pad" and values["p1"] + values["p2"] > 1.0 + 1e-15:
        raise ParamOutOfRange(f"pad needs p1 + p2 <= 1, got {values['p1'] + values['p2']}")
    if tag == "dep2":
        ch = tensor_channel(build("depolarizing", p=values["p1"]),
                            build("depolarizing", p=values["p2"]), label="dep2")
        return KrausChannel("dep2", ch.kraus, values)
    return KrausChannel(tag, tuple(entry.kraus(*values.values())), values)


class Realness(enum.Enum):
    REAL_KRAUS = "RealKraus"
    REAL_PRESERVING_SAMPLED = "RealPreservingSampled"
    NOT_REAL_PRESERVING = "NotRealPreserving"


def is_real_operation(ch: KrausChannel, tol: float = 1e-12, n_samples: int = 200,
                      seed: int = 0) -> Realness:
    """Classify a channel as having real Kraus operators, or as mapping sampled real states to real states."""
    if all(np.max(np.abs(k.imag)) <= tol for k in ch.kraus):
        return Realness.REAL_KRAUS
    rng = np.random.default_rng(seed)
    rhos = np.stack([random_real_density(rng, ch.dim_in) for _ in range(n_samples)])
    outs = ch.apply(rhos)
    if all(is_real_state(o, 1e-10) for o in outs):
        return Realness.REAL_PRESERVING_SAMPLED
    return Realness.NOT_REAL_PRESERVING

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from imaglab import channels, states
from imaglab.measures import (MeasureKind, all_measures, convexity_violation, faithfulness_violation,
                              measure, measure_l1, measure_rel_entropy, measure_robustness,
                              monotonicity_violation, orthogonal_invariance_violation)

KINDS = list(MeasureKind)


def _oracle_rel_entropy(rho):
    """S(Re rho) - S(rho) with numpy's eigensolver."""
    def s(m):
        w = np.linalg.eigvalsh(m)
        w = w[w > 1e-12]
        return float(-np.sum(w * np.log2(w)))
    return s(rho.real) - s(rho)


def _binary_entropy(x):
    return -sum(t * np.log2(t) for t in (x, 1 - x) if t > 0)


@pytest.mark.parametrize("kind", KINDS)
def test_maximal_imaginary_qubit_has_unit_imaginarity(kind):
    assert abs(measure(kind, states.maximal_imaginary_state()) - 1.0) < 1e-12


def test_plus_plus_values():
    rho = states.maximal_imaginary_state(2)
    assert abs(measure_l1(rho) - 2.0) < 1e-12
    assert abs(measure_robustness(rho) - 1.0) < 1e-12
    # Re(rho) has spectrum {1/2, 1/2, 0, 0}, so one bit
    assert abs(measure_rel_entropy(rho) - _oracle_rel_entropy(rho)) < 1e-12
    assert abs(measure_rel_entropy(rho) - 1.0) < 1e-12


@pytest.mark.parametrize("A", np.linspace(0, 1, 7))
def test_canonical_qubit_closed_values(A):
    rho = states.canonical_density(A)
    assert abs(measure_l1(rho) - np.sqrt(1 - A * A)) < 1e-12
    assert abs(measure_robustness(rho) - np.sqrt(1 - A * A)) < 1e-12
    assert abs(measure_rel_entropy(rho) - _binary_entropy((1 + A) / 2)) < 1e-12


def test_batched_measures_match_single():
    rng = np.random.default_rng(2)
    rhos = np.stack([states.random_density(rng, 4) for _ in range(30)])
    for kind in KINDS:
        batch = measure(kind, rhos)
        assert np.allclose(batch, [measure(kind, r) for r in rhos], atol=1e-13)


def test_rel_entropy_against_numpy_oracle():
    rng = np.random.default_rng(4)
    for dim in (2, 3, 4):
        for _ in range(20):
            rho = states.random_density(rng, dim)
            assert abs(measure_rel_entropy(rho) - _oracle_rel_entropy(rho)) < 1e-10


def test_robustness_against_svd_oracle():
    rng = np.random.default_rng(8)
    for _ in range(20):
        rho = states.random_density(rng, 4)
        expected = 0.5 * np.linalg.svd(rho - rho.T, compute_uv=False).sum()
        assert abs(measure_robustness(rho) - expected) < 1e-10


def test_all_measures_keys():
    assert set(all_measures(np.eye(2) / 2)) == set(MeasureKind)


@pytest.mark.parametrize("kind", KINDS)
def test_faithfulness_on_mixed_population(kind):
    rng = np.random.default_rng(10)
    real = [states.random_real_density(rng, 4) for _ in range(50)]
    imag = [states.random_density(rng, 4) for _ in range(50)]
    assert faithfulness_violation(kind, np.stack(real + imag)) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(KINDS))
def test_qubit_orthogonal_invariance(seed, kind):
    rng = np.random.default_rng(seed)
    rhos = np.stack([states.random_density(rng, 2) for _ in range(5)])
    o = states.random_orthogonal(rng, 2)
    assert orthogonal_invariance_violation(kind, o, rhos) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([MeasureKind.ROBUSTNESS, MeasureKind.REL_ENTROPY]))
def test_two_qubit_orthogonal_invariance(seed, kind):
    rng = np.random.default_rng(seed)
    rhos = np.stack([states.random_density(rng, 4) for _ in range(5)])
    o = states.random_orthogonal(rng, 4)
    assert orthogonal_invariance_violation(kind, o, rhos) < 1e-9


def test_l1_invariance_in_dimension_four():
    rng = np.random.default_rng(6)
    rhos = np.stack([states.random_density(rng, 4) for _ in range(50)])
    signed_perm = np.eye(4)[rng.permutation(4)] * rng.choice([-1.0, 1.0], 4)
    assert orthogonal_invariance_violation(MeasureKind.L1, signed_perm, rhos) < 1e-12
    # a plane rotation acting inside span{|00>, |11>} keeps l1 for states living there
    c, s_ = np.cos(0.7), np.sin(0.7)
    o = np.eye(4)
    o[0, 0], o[0, 3], o[3, 0], o[3, 3] = c, -s_, s_, c
    inside = np.stack([states.canonical_density(a, "00_11") for a in np.linspace(0, 1, 9)])
    assert orthogonal_invariance_violation(MeasureKind.L1, o, inside) < 1e-12
    # a generic 4x4 rotation does not: the entrywise l1 sum is basis dependent beyond one qubit
    generic = states.random_orthogonal(rng, 4)
    assert orthogonal_invariance_violation(MeasureKind.L1, generic, rhos) > 1e-3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(KINDS))
def test_convexity(seed, kind):
    rng = np.random.default_rng(seed)
    rhos = np.stack([states.random_density(rng, 2) for _ in range(3)])
    weights = rng.dirichlet(np.ones(3))
    assert convexity_violation(kind, weights, rhos) <= 1e-9


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("tag, params", [
    ("dephasing", {"p": 0.4}),
    ("gad", {"p1": 0.3, "p2": 0.6}),
    ("amplitudedamping", {"g": 0.7}),
    ("bitflip", {"p": 0.2}),
])
def test_monotone_under_real_channels(kind, tag, params):
    rng = np.random.default_rng(12)
    rhos = np.stack([states.random_density(rng, 2) for _ in range(40)])
    assert monotonicity_violation(kind, channels.build(tag, **params), rhos) <= 1e-9

import itertools

import numpy as np
import pytest

from imaglab import channels, states
from imaglab.errors import DimensionMismatch, IncompleteKraus, ParamOutOfRange
from imaglab.reference_outputs import OUTPUT_CASES, reproduction_error, sample_case_point

GRID6 = np.linspace(0, 1, 6)


def _grid_points(tag):
    names = channels.CATALOG[tag].params
    for combo in itertools.product(GRID6, repeat=len(names)):
        pt = dict(zip(names, map(float, combo)))
        if tag == "pad" and pt["p1"] + pt["p2"] > 1:
            continue
        yield pt


@pytest.mark.parametrize("tag", list(channels.CATALOG))
def test_catalog_is_trace_preserving(tag):
    for pt in _grid_points(tag):
        ch = channels.build(tag, **pt)
        assert ch.completeness_defect() <= 1e-12
        assert len(ch.kraus) <= ch.dim_in ** 2


@pytest.mark.parametrize("case", OUTPUT_CASES, ids=lambda c: c.name)
def test_printed_outputs_reproduced(case):
    rng = np.random.default_rng(1)
    for _ in range(25):
        assert reproduction_error(case, sample_case_point(case, rng)) <= 1e-12


def test_incomplete_kraus_rejected():
    with pytest.raises(IncompleteKraus):
        channels.KrausChannel("bad", (np.eye(2) * 0.9,))
    with pytest.raises(DimensionMismatch):
        channels.KrausChannel("bad", (np.eye(2), np.eye(3)))


def test_apply_dimension_check():
    with pytest.raises(DimensionMismatch):
        channels.build("dephasing", p=0.1).apply(np.eye(4) / 4)


@pytest.mark.parametrize("tag, params", [
    ("dephasing", {"p": 1.5}),
    ("pad", {"p1": 0.7, "p2": 0.7}),
    ("gad", {"p1": -0.1, "p2": 0.5}),
])
def test_parameter_validation(tag, params):
    with pytest.raises(ParamOutOfRange):
        channels.build(tag, **params)


def test_build_rejects_unknown_tag_and_wrong_params():
    with pytest.raises(ValueError):
        channels.build("teleport", p=0.1)
    with pytest.raises(ValueError):
        channels.build("dephasing", g=0.1)


def test_apply_batched_matches_loop():
    rng = np.random.default_rng(0)
    rhos = np.stack([states.random_density(rng, 4) for _ in range(10)])
    ch = channels.build("ad2", g1=0.3, g2=0.8)
    assert np.allclose(ch.apply(rhos), np.stack([ch(r) for r in rhos]), atol=1e-14)


def _rho4(seed=0):
    return states.random_density(np.random.default_rng(seed), 4)


@pytest.mark.parametrize("two, one, names", [
    ("ad2", "amplitudedamping", ("g1", "g2")),
    ("pd2", "phasedamping", ("g1", "g2")),
])
def test_two_qubit_damping_is_tensor_product(two, one, names):
    rho = _rho4()
    for a, b in [(0.2, 0.7), (0.0, 1.0), (0.5, 0.5)]:
        tensored = channels.tensor_channel(channels.build(one, g=a), channels.build(one, g=b))
        direct = channels.build(two, **dict(zip(names, (a, b))))
        assert np.allclose(tensored.apply(rho), direct.apply(rho), atol=1e-13)


@pytest.mark.parametrize("two, one", [("pf2", "phaseflip"), ("bf2", "bitflip"), ("bpf2", "bitphaseflip")])
def test_two_qubit_flips_are_tensor_products(two, one):
    rho = _rho4(1)
    for a, b in [(0.2, 0.7), (1.0, 0.0)]:
        tensored = channels.tensor_channel(channels.build(one, p=a), channels.build(one, p=b))
        assert np.allclose(tensored.apply(rho), channels.build(two, p1=a, p2=b).apply(rho), atol=1e-13)


def test_tensor_channel_matches_kron_loop():
    a = channels.build("gad", p1=0.3, p2=0.4)
    b = channels.build("depolarizing", p=0.6)
    t = channels.tensor_channel(a, b)
    expected = [np.kron(ka, kb) for ka in a.kraus for kb in b.kraus]
    assert all(np.allclose(x, y) for x, y in zip(t.kraus, expected))


def test_pad_degenerations():
    rho = states.random_density(np.random.default_rng(3), 2)
    # p1 = 0 leaves pure amplitude damping, p2 = 0 pure phase damping
    assert np.allclose(channels.build("pad", p1=0.0, p2=0.4).apply(rho),
                       channels.build("amplitudedamping", g=0.4).apply(rho), atol=1e-14)
    assert np.allclose(channels.build("pad", p1=0.4, p2=0.0).apply(rho),
                       channels.build("phasedamping", g=0.4).apply(rho), atol=1e-14)


def test_flip_probability_means_no_error():
    rho = states.canonical_density(0.3)
    assert np.allclose(channels.build("bitflip", p=1.0).apply(rho), rho)
    x = states.PAULI_X
    assert np.allclose(channels.build("bitflip", p=0.0).apply(rho), x @ rho @ x)


@pytest.mark.parametrize("tag, params, expected", [
    ("dephasing", {"p": 0.3}, channels.Realness.REAL_KRAUS),
    ("gad", {"p1": 0.3, "p2": 0.2}, channels.Realness.REAL_KRAUS),
    ("bitphaseflip", {"p": 0.5}, channels.Realness.REAL_PRESERVING_SAMPLED),
    ("depolarizing", {"p": 0.5}, channels.Realness.REAL_PRESERVING_SAMPLED),
])
def test_realness_classification(tag, params, expected):
    assert channels.is_real_operation(channels.build(tag, **params)) == expected


def test_imaginary_unitary_is_not_real_preserving():
    s_gate = np.diag([1.0, 1j])
    ch = channels.KrausChannel("S", (s_gate,))
    assert channels.is_real_operation(ch) == channels.Realness.NOT_REAL_PRESERVING

import math

import numpy as np
import pytest

from imaglab import channels, states
from imaglab.decay import (DECAY_FORMULAS, DecayFormula, decay_closed_form, decay_numeric, decay_table,
                           in_verified_domain, verify_formula)
from imaglab.errors import OutOfRange, ParamOutOfRange
from imaglab.measures import MeasureKind

L1R_FORMULAS = [f for f in DecayFormula if f.value.endswith("L1R")]


@pytest.mark.parametrize("formula", list(DecayFormula), ids=lambda f: f.value)
def test_closed_form_matches_pipeline(formula):
    report = verify_formula(formula)
    assert report.passed, report.summary()
    assert report.checked


def test_dephasing_spot_values():
    ch = channels.build("dephasing", p=1.0)
    rho = states.canonical_density(0.0)
    assert abs(decay_numeric(ch, "rel-entropy", rho).delta - 1.0) < 1e-9
    assert abs(decay_numeric(ch, "l1", rho).delta - 1.0) < 1e-12
    assert abs(decay_closed_form("D_r", {"p": 1.0}, 0.0) - 1.0) < 1e-12
    assert abs(decay_closed_form("D_L1R", {"p": 1.0}, 0.0) - 1.0) < 1e-12


@pytest.mark.parametrize("formula", L1R_FORMULAS, ids=lambda f: f.value)
def test_l1r_decays_vanish_on_real_input(formula):
    spec = DECAY_FORMULAS[formula]
    for v in np.linspace(0, 1, 5):
        params = {name: float(v) / len(spec.params) for name in spec.params}
        assert abs(decay_closed_form(formula, params, 1.0)) < 1e-12


def test_dephasing_closed_form_by_hand():
    # off-diagonals shrink by (1-p), so the l1 decay is p * sqrt(1 - A^2)
    for A, p in [(0.2, 0.3), (0.9, 0.5), (0.0, 0.25)]:
        assert abs(decay_closed_form("D_L1R", {"p": p}, A) - p * math.sqrt(1 - A * A)) < 1e-12


def test_bf2_l1r_region_flagged_exactly_where_it_deviates():
    report = verify_formula(DecayFormula.BF2_L1R)
    for pt in report.points:
        if pt.params["A"] == 1.0:
            continue  # both sides vanish on a real input
        deviates = pt.deviation > report.tol
        assert deviates == (not pt.in_domain), pt.params


@pytest.mark.parametrize("p1, p2, expected", [
    (0.5, 0.3, True), (1.0, 0.5, True), (1.0, 0.0, False), (0.2, 0.7, False), (0.3, 0.3, False), (0.5, 0.5, True),
])
def test_bf2_verified_domain_predicate(p1, p2, expected):
    assert in_verified_domain("BF2_L1R", {"p1": p1, "p2": p2}) == expected


def test_closed_form_input_validation():
    with pytest.raises(OutOfRange):
        decay_closed_form("D_L1R", {"p": 0.5}, 1.5)
    with pytest.raises(ParamOutOfRange):
        decay_closed_form("PAD_L1R", {"p1": 0.8, "p2": 0.5}, 0.2)
    with pytest.raises(ValueError):
        decay_closed_form("GAD_L1R", {"p": 0.5}, 0.2)


def test_decay_numeric_delta_is_unclamped_difference():
    ch = channels.build("gad", p1=0.4, p2=0.6)
    res = decay_numeric(ch, "robustness", states.canonical_density(0.3))
    assert res.delta == res.initial - res.final
    assert res.final <= res.initial


def test_decay_table_shape_and_values():
    make = lambda p: channels.build("dephasing", p=p)  # noqa: E731
    A = np.array([0.0, 0.5, 1.0])
    table = decay_table(make, states.CanonicalPattern.QUBIT_01, [{"p": 0.2}, {"p": 0.9}], A, list(MeasureKind))
    assert table[MeasureKind.L1].shape == (2, 3)
    assert abs(table[MeasureKind.L1][1, 1] - 0.9 * math.sqrt(0.75)) < 1e-12

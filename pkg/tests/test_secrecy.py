import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fsecrecy import secrecy
from fsecrecy.fading import FadingParams
from fsecrecy.secrecy import Method, MetricResult, WiretapScenario

# mpmath references, see scripts/derive_oracles.py
ASC_ORACLE = 1.0846564702754431876
SOP_E_ORACLE = 0.50060756130919839774
SOP_ORACLE = 0.19577468688157386919
SOP_LOWER_ORACLE = 0.1717167721563484523
SPSC_ORACLE = 0.97192379609071727879
I3_ORACLE = 1.144953492631325171


def _base(r_s=0.0):
    return WiretapScenario(FadingParams.from_db(2.5, 5.0, 10.0), FadingParams.from_db(1.0, 2.0, 5.0), r_s)


def _ratio(m_e, m_se, r_s=0.0, lam_db=10.0):
    return WiretapScenario.from_ratio(2.5, 5.0, m_e, m_se, 10 ** (lam_db / 10), 10 ** 0.5, r_s)


def test_asc_oracle():
    assert secrecy.asc_closed(_base()).value == pytest.approx(ASC_ORACLE, rel=1e-9)
    assert secrecy.asc_quadrature(_base()).value == pytest.approx(ASC_ORACLE, rel=1e-9)


def test_sop_oracle_theta_e():
    s = _base(1.0)
    assert s.theta == pytest.approx(math.e)
    assert secrecy.sop_closed(s).value == pytest.approx(SOP_E_ORACLE, rel=1e-9)
    assert secrecy.sop_quadrature(s).value == pytest.approx(SOP_E_ORACLE, rel=1e-9)


def test_sop_and_lower_bound_oracles():
    s = _ratio(1.5, 2.5, r_s=1.0)
    assert secrecy.sop_closed(s).value == pytest.approx(SOP_ORACLE, rel=1e-9)
    assert secrecy.sop_lower_closed(s).value == pytest.approx(SOP_LOWER_ORACLE, rel=1e-9)
    assert secrecy.sop_lower_quadrature(s).value == pytest.approx(SOP_LOWER_ORACLE, rel=1e-9)


def test_spsc_oracle():
    s = _ratio(0.5, 50.0)
    assert secrecy.spsc(s).value == pytest.approx(SPSC_ORACLE, rel=1e-9)
    assert secrecy.spsc_quadrature(s).value == pytest.approx(SPSC_ORACLE, rel=1e-9)


def test_i3_oracle():
    e = FadingParams(1.5, 2.5, 1.5 / (2.5 * 0.3))
    value, _, _ = secrecy._i3_closed(e)
    assert value == pytest.approx(I3_ORACLE, rel=1e-9)


def test_result_types():
    r = secrecy.asc_closed(_base())
    assert isinstance(r, MetricResult)
    assert r.method is Method.CLOSED_FORM
    assert 0 <= r.abs_error_estimate < 1e-6
    assert r.flags == frozenset()
    with pytest.raises(ValueError):
        MetricResult(1.0, Method.QUADRATURE, -1.0)


def test_scenario_validation_and_theta():
    with pytest.raises(ValueError):
        _base(-0.1)
    with pytest.raises(ValueError):
        _base(math.inf)
    s = _base(0.5)
    assert s.theta == pytest.approx(math.exp(0.5))
    assert s.with_rate(0.0).theta == 1.0
    assert s.swapped().main == s.eve


def test_sop_closed_needs_positive_rate():
    with pytest.raises(ValueError):
        secrecy.sop_closed(_base(0.0))


def test_near_singular_theta_flag():
    s = _ratio(1.5, 2.5, r_s=5e-4)
    r = secrecy.sop_closed(s)
    assert secrecy.NEAR_SINGULAR_THETA in r.flags
    assert r.value == pytest.approx(secrecy.sop_quadrature(s).value, abs=1e-6)
    assert secrecy.NEAR_SINGULAR_THETA not in secrecy.sop_closed(_ratio(1.5, 2.5, r_s=0.1)).flags


def test_integer_eve_multipath():
    s = _ratio(1.0, 3.0, r_s=0.7)
    closed = secrecy.sop_closed(s)
    assert closed.value == pytest.approx(secrecy.sop_quadrature(s).value, rel=1e-8)
    assert secrecy.PERTURBED not in closed.flags
    a = _ratio(2.0, 3.0)
    assert secrecy.asc_closed(a).value == pytest.approx(secrecy.asc_quadrature(a).value, rel=1e-8)


def test_identical_channels_split_evenly():
    p = FadingParams(1.7, 3.2, 4.0)
    assert secrecy.spsc(WiretapScenario(p, p)).value == pytest.approx(0.5, abs=1e-10)


def test_extreme_ratios():
    assert secrecy.spsc(_ratio(1.5, 2.5, lam_db=60.0)).value > 0.999
    assert secrecy.sop_closed(_ratio(1.5, 2.5, 1.0, lam_db=60.0)).value < 1e-3
    assert secrecy.sop_closed(_ratio(1.5, 2.5, 1.0, lam_db=-30.0)).value > 0.99


def test_evaluate_dispatch():
    s = _ratio(1.5, 2.5, r_s=1.0)
    assert secrecy.evaluate("sop", s, "closed_form").method is Method.CLOSED_FORM
    assert secrecy.evaluate("sop", s, Method.QUADRATURE).method is Method.QUADRATURE
    with pytest.raises(ValueError):
        secrecy.evaluate("nope", s, "closed_form")
    with pytest.raises(ValueError):
        secrecy.evaluate("sop", s, "monte_carlo")
    assert set(secrecy.METRICS) == {"asc", "sop", "sop_lower", "spsc"}


shape = st.floats(0.55, 8.0)
lam = st.floats(-10.0, 30.0)
rate = st.floats(0.05, 2.0)


def _scenario(m_d, m_sd, m_e, m_se, lam_db, r_s=0.0):
    return WiretapScenario.from_ratio(m_d, m_sd, m_e, m_se, 10 ** (lam_db / 10), 10 ** 0.5, r_s)


@settings(max_examples=12)
@given(shape, shape, shape, shape, lam)
def test_asc_closed_matches_quadrature(m_d, m_sd, m_e, m_se, lam_db):
    s = _scenario(m_d, m_sd, m_e, m_se, lam_db)
    q = secrecy.asc_quadrature(s).value
    assert secrecy.asc_closed(s).value == pytest.approx(q, rel=1e-6, abs=1e-9)


@settings(max_examples=12)
@given(shape, shape, shape, shape, lam)
def test_asc_antisymmetry(m_d, m_sd, m_e, m_se, lam_db):
    # ASC(D, E) - ASC(E, D) = E ln(1 + g_D) - E ln(1 + g_E)
    s = _scenario(m_d, m_sd, m_e, m_se, lam_db)
    diff = secrecy.asc_closed(s).value - secrecy.asc_closed(s.swapped()).value
    means = secrecy._i3_closed(s.main)[0] - secrecy._i3_closed(s.eve)[0]
    assert diff == pytest.approx(means, rel=1e-7, abs=1e-9)


@settings(max_examples=12)
@given(shape, shape, shape, shape, lam, rate)
def test_outage_bounds_and_order(m_d, m_sd, m_e, m_se, lam_db, r_s):
    s = _scenario(m_d, m_sd, m_e, m_se, lam_db, r_s)
    sop = secrecy.sop_closed(s).value
    low = secrecy.sop_lower_closed(s).value
    assert -1e-8 <= low <= sop + 1e-8
    assert sop <= 1 + 1e-8
    assert sop == pytest.approx(secrecy.sop_quadrature(s).value, rel=1e-6, abs=1e-9)


@settings(max_examples=10)
@given(shape, shape, shape, shape, lam)
def test_spsc_complements_lower_bound(m_d, m_sd, m_e, m_se, lam_db):
    s = _scenario(m_d, m_sd, m_e, m_se, lam_db)
    total = secrecy.spsc(s).value + secrecy.sop_lower_closed(s).value
    assert total == pytest.approx(1.0, abs=1e-12)
    assert secrecy.spsc(s).value == pytest.approx(secrecy.spsc_quadrature(s).value, abs=1e-8)


@settings(max_examples=8)
@given(shape, shape, shape, shape, lam, st.floats(1.0, 10.0))
def test_monotone_in_ratio(m_d, m_sd, m_e, m_se, lam_db, step):
    assume(lam_db + step <= 30)
    lo = _scenario(m_d, m_sd, m_e, m_se, lam_db, 0.5)
    hi = _scenario(m_d, m_sd, m_e, m_se, lam_db + step, 0.5)
    assert secrecy.asc_closed(hi).value >= secrecy.asc_closed(lo).value - 1e-9
    assert secrecy.sop_closed(hi).value <= secrecy.sop_closed(lo).value + 1e-9


@settings(max_examples=8)
@given(shape, shape, shape, shape, lam, rate, st.floats(0.05, 1.0))
def test_outage_increases_with_rate(m_d, m_sd, m_e, m_se, lam_db, r_s, dr):
    s = _scenario(m_d, m_sd, m_e, m_se, lam_db, r_s)
    assert secrecy.sop_closed(s.with_rate(r_s + dr)).value >= secrecy.sop_closed(s).value - 1e-9

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fsecrecy.errors import ContourError, PoleError
from fsecrecy.specfun import (ContourSettings, EgbmgfSpec, GBlock, MeijerGSpec, beta, egbmgf,
                              egbmgf_detailed, gauss_2f1, log_beta, log_gamma, meijer_g,
                              meijer_g_detailed, place_contours)
from fsecrecy.specfun.hyp2f1 import _series

# mpmath references, see scripts/derive_oracles.py
LOG_GAMMA_10_3 = 13.482036786138356971
BETA_2_5_5 = 0.017049617049617049617
HYP_7_5_2_5_3_5_AT_M08 = 0.05612740818176049287
I3_ORACLE = 1.144953492631325171
I1_ORACLE = 1.9578324867861659499
I2_ORACLE = 0.54131733127638067909
SOP_ORACLE = 0.50060756130919839774

positive = st.floats(min_value=0.05, max_value=40.0, allow_nan=False)


# ----------------------------------------------------------------- gamma/beta


def test_log_gamma_half():
    value, sign = log_gamma(0.5)
    assert value == pytest.approx(0.5723649429247001, rel=1e-13)
    assert sign == 1


def test_log_gamma_integer():
    assert log_gamma(5.0)[0] == pytest.approx(math.log(24.0), rel=1e-13)


def test_log_gamma_oracle():
    assert log_gamma(10.3)[0] == pytest.approx(LOG_GAMMA_10_3, rel=1e-13)


def test_log_gamma_negative_sign():
    value, sign = log_gamma(-0.5)
    assert sign == -1
    assert value == pytest.approx(math.log(2 * math.sqrt(math.pi)), rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
def test_log_gamma_poles(x):
    with pytest.raises(PoleError):
        log_gamma(x)


@given(st.floats(min_value=1e-3, max_value=1e3))
def test_log_gamma_matches_mpmath(x):
    assert log_gamma(x)[0] == pytest.approx(float(mp.loggamma(x)), rel=1e-13, abs=1e-15)


def test_beta_examples():
    assert beta(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert beta(1.0, 5.0) == pytest.approx(0.2, rel=1e-14)
    assert beta(2.5, 5.0) == pytest.approx(BETA_2_5_5, rel=1e-12)


@pytest.mark.parametrize("a, b", [(0.0, 1.0), (1.0, -2.0)])
def test_beta_domain(a, b):
    with pytest.raises(ValueError):
        beta(a, b)


@given(positive, positive)
def test_beta_symmetry_and_recurrence(a, b):
    assert beta(a, b) == pytest.approx(beta(b, a), rel=1e-12)
    assert beta(a + 1, b) / beta(a, b) == pytest.approx(a / (a + b), rel=1e-12)
    assert log_beta(a, b) == pytest.approx(math.log(beta(a, b)), rel=1e-12, abs=1e-12)


# ------------------------------------------------------------------------ 2F1


def test_hyp2f1_at_zero():
    assert gauss_2f1(3.3, -1.2, 0.7, 0.0) == 1.0


def test_hyp2f1_log_identity():
    assert gauss_2f1(1.0, 1.0, 2.0, -1.0) == pytest.approx(math.log(2.0), rel=1e-14)


def test_hyp2f1_oracle():
    assert gauss_2f1(7.5, 2.5, 3.5, -0.8) == pytest.approx(HYP_7_5_2_5_3_5_AT_M08, rel=1e-10)


@pytest.mark.parametrize("c", [0.0, -3.0])
def test_hyp2f1_invalid_c(c):
    with pytest.raises(PoleError):
        gauss_2f1(1.0, 1.0, c, -0.5)


def test_hyp2f1_positive_argument_rejected():
    with pytest.raises(ValueError):
        gauss_2f1(1.0, 1.0, 2.0, 0.5)


def test_hyp2f1_direct_needs_unit_disk():
    with pytest.raises(ValueError):
        gauss_2f1(1.0, 1.0, 2.0, -2.0, method="direct")


def test_hyp2f1_array_matches_scalar():
    z = np.array([0.0, -0.3, -0.9, -5.0, -1e6])
    out = gauss_2f1(2.5, 1.5, 3.5, z)
    assert out.shape == z.shape
    for zi, oi in zip(z, out):
        assert oi == gauss_2f1(2.5, 1.5, 3.5, float(zi))


@pytest.mark.parametrize("a, b, c", [(7.5, 2.5, 3.5), (52.5, 2.5, 3.5), (1.0, 1.0, 2.0),
                                     (0.5, 50.5, 1.5), (3.0, 2.0, 5.0), (55.0, 50.0, 51.0)])
@pytest.mark.parametrize("z", [-0.2, -0.99, -3.0, -123.4, -1e5, -1e10])
def test_hyp2f1_matches_mpmath(a, b, c, z):
    ref = float(mp.hyp2f1(a, b, c, z))
    assert gauss_2f1(a, b, c, z) == pytest.approx(ref, rel=1e-10, abs=1e-300)


@given(st.floats(0.1, 20.0), st.floats(0.1, 20.0), st.floats(0.2, 20.0), st.floats(-0.98, -0.5))
@settings(max_examples=60)
def test_hyp2f1_pfaff_agrees_with_direct(a, b, c, z):
    # the alternating series loses digits when its terms dwarf the sum; compare only where it is sound
    total, biggest = _series(a, b, c, np.array([z]))
    assume(biggest[0] < 1e5 * abs(total[0]))
    direct = gauss_2f1(a, b, c, z, method="direct")
    pfaff = gauss_2f1(a, b, c, z, method="pfaff")
    assert pfaff == pytest.approx(direct, rel=1e-9)


@given(st.floats(0.1, 20.0), st.floats(0.1, 20.0), st.floats(0.2, 20.0), st.floats(-1e6, -0.1))
@settings(max_examples=60)
def test_hyp2f1_auto_matches_mpmath(a, b, c, z):
    # with c below both a and b every series form cancels; outside the accuracy contract
    assume(c >= min(a, b))
    assert gauss_2f1(a, b, c, z) == pytest.approx(float(mp.hyp2f1(a, b, c, z)), rel=1e-10)


def test_hyp2f1_scale_power():
    z = -40.0
    assert gauss_2f1(2.0, 1.5, 3.0, z, scale_power=2.0) == pytest.approx(
        41.0**2 * gauss_2f1(2.0, 1.5, 3.0, z), rel=1e-13)


# ------------------------------------------------------------------ Meijer G


def test_meijer_exp():
    assert meijer_g(MeijerGSpec(b_bottom=(0.0,), argument=1.0)) == pytest.approx(math.exp(-1), rel=1e-10)


def test_meijer_power():
    spec = MeijerGSpec(a_top=(-1.0,), b_bottom=(0.0,), argument=1.0)
    assert meijer_g(spec) == pytest.approx(0.25, rel=1e-10)


def test_meijer_log_kernel():
    # ln(1 + x) = G^{1,2}_{2,2}(1, 1; 1, 0 | x)
    spec = MeijerGSpec(a_top=(1.0, 1.0), b_bottom=(1.0,), b_rest=(0.0,), argument=3.7)
    assert meijer_g(spec) == pytest.approx(math.log1p(3.7), rel=1e-10)


def test_meijer_i3_oracle():
    m, m_s, xi = 1.5, 2.5, 0.3
    spec = MeijerGSpec(a_top=(1 - m, 1.0, 1.0), b_bottom=(m_s, 1.0), b_rest=(0.0,), argument=1 / xi)
    value = meijer_g(spec) / (math.gamma(m) * math.gamma(m_s))
    assert value == pytest.approx(I3_ORACLE, rel=1e-8)


@pytest.mark.parametrize("x", [0.01, 0.3, 2.5, 40.0])
def test_meijer_matches_mpmath_p_less_than_q(x):
    spec = MeijerGSpec(a_top=(0.3,), b_bottom=(0.1, 1.7), b_rest=(-0.4,), argument=x)
    ref = float(mp.meijerg([[0.3], []], [[0.1, 1.7], [-0.4]], x))
    assert meijer_g(spec) == pytest.approx(ref, rel=1e-9)


def test_meijer_series_and_contour_agree():
    spec = MeijerGSpec(a_top=(-1.2, 0.4), b_bottom=(0.3, 1.1), b_rest=(-0.6,), a_rest=(0.9,), argument=0.2)
    series = meijer_g_detailed(spec, "series")
    contour = meijer_g_detailed(spec, "contour")
    assert series.value == pytest.approx(contour.value, rel=1e-9)
    assert series.method != contour.method


def test_meijer_coincident_poles_use_contour():
    # b_bottom = (1, 1) gives double poles
    spec = MeijerGSpec(a_top=(0.5, 1.0, 1.0), b_bottom=(1.0, 1.0), b_rest=(0.0,), argument=0.1)
    ev = meijer_g_detailed(spec)
    assert ev.method == "contour"
    assert not ev.perturbed
    perturbed = meijer_g_detailed(spec, "series")
    assert perturbed.perturbed
    assert perturbed.value == pytest.approx(ev.value, rel=1e-6)


def test_meijer_pole_error():
    with pytest.raises(PoleError):
        meijer_g(MeijerGSpec(a_top=(2.0,), b_bottom=(0.0,), argument=1.0))


def test_meijer_spec_limits():
    with pytest.raises(ValueError):
        MeijerGSpec(b_bottom=(0.0,) * 5, argument=1.0)
    with pytest.raises(ValueError):
        MeijerGSpec(b_bottom=(0.0,), argument=-1.0)


def test_contour_settings_validation():
    with pytest.raises(ValueError):
        ContourSettings(nodes_per_unit=4)
    with pytest.raises(ValueError):
        ContourSettings(half_width=0.0)


@given(st.floats(0.01, 50.0))
@settings(max_examples=40)
def test_meijer_exp_identity_property(x):
    assert meijer_g(MeijerGSpec(b_bottom=(0.0,), argument=x)) == pytest.approx(math.exp(-x), rel=1e-10)


@given(st.floats(0.01, 50.0), st.floats(0.1, 6.0))
@settings(max_examples=40)
def test_meijer_power_identity_property(x, a):
    spec = MeijerGSpec(a_top=(1 - a,), b_bottom=(0.0,), argument=x)
    assert meijer_g(spec) == pytest.approx(math.gamma(a) * (1 + x) ** -a, rel=1e-10)


def test_meijer_pure():
    spec = MeijerGSpec(a_top=(1 - 1.5, 1.0, 1.0), b_bottom=(2.5, 1.0), b_rest=(0.0,), argument=3.0)
    assert meijer_g(spec) == meijer_g(spec)


# --------------------------------------------------------------------- EGBMGF


def _i1_spec(m_d, m_sd, xi_d, m_e, m_se, xi_e):
    return EgbmgfSpec(
        outer=GBlock(a_top=(1 - m_d - m_e,), b_bottom=(m_sd - m_e,)),
        inner1=GBlock(a_top=(1.0, 1.0), b_bottom=(1.0,), b_rest=(0.0,)),
        inner2=GBlock(a_top=(1 - m_e - m_se, 1 - m_e), b_bottom=(0.0,), b_rest=(-m_e,)),
        x=1 / xi_d, y=xi_e / xi_d)


def _i1_value(d, e):
    xi_d, xi_e = d[0] / (d[1] * d[2]), e[0] / (e[1] * e[2])
    spec = _i1_spec(d[0], d[1], xi_d, e[0], e[1], xi_e)
    scale = (xi_e / xi_d) ** e[0] / (math.gamma(d[0]) * math.gamma(d[1]) * math.gamma(e[0]) * math.gamma(e[1]))
    return scale * egbmgf(spec)


D_EXAMPLE = (2.5, 5.0, 10.0)
E_EXAMPLE = (1.0, 2.0, 10 ** 0.5)


def test_egbmgf_i1_oracle():
    assert _i1_value(D_EXAMPLE, E_EXAMPLE) == pytest.approx(I1_ORACLE, rel=1e-6)


def test_egbmgf_i2_by_relabeling():
    assert _i1_value(E_EXAMPLE, D_EXAMPLE) == pytest.approx(I2_ORACLE, rel=1e-6)


def test_egbmgf_sop_oracle():
    m_d, m_sd, g_d = D_EXAMPLE
    m_e, m_se, g_e = E_EXAMPLE
    xi_d, xi_e, theta = m_d / (m_sd * g_d), m_e / (m_se * g_e), math.e
    spec = EgbmgfSpec(outer=GBlock(a_top=(1.0,)),
                      inner1=GBlock(a_top=(1 - m_d,), b_bottom=(m_sd,), b_rest=(0.0,)),
                      inner2=GBlock(a_top=(1 - m_e,), b_bottom=(0.0, m_se)),
                      x=1 / (xi_d * (theta - 1)), y=theta / ((theta - 1) * xi_e))
    norm = math.gamma(m_d) * math.gamma(m_sd) * math.gamma(m_e) * math.gamma(m_se)
    assert 1 - egbmgf(spec) / norm == pytest.approx(SOP_ORACLE, rel=1e-6)


def test_egbmgf_refinement_invariance():
    spec = _i1_spec(2.5, 5.0, 0.05, 1.0, 2.0, 0.16)
    base = ContourSettings()
    assert egbmgf(spec, base.doubled()) == pytest.approx(egbmgf(spec, base), rel=1e-6)


def test_egbmgf_explicit_contours():
    spec = _i1_spec(2.5, 5.0, 0.05, 1.0, 2.0, 0.16)
    c1, c2, margin = place_contours(spec)
    assert margin > 0
    moved = egbmgf(spec, ContourSettings(shift1=0.5, shift2=-0.3))
    assert moved == pytest.approx(egbmgf(spec), rel=1e-6)


def test_egbmgf_contour_error():
    # both inner strips are (0, 1) but the outer kernel needs s + t < 0
    log_kernel = GBlock(a_top=(1.0, 1.0), b_bottom=(1.0,), b_rest=(0.0,))
    spec = EgbmgfSpec(outer=GBlock(b_bottom=(0.0,)), inner1=log_kernel, inner2=log_kernel, x=1.0, y=1.0)
    with pytest.raises(ContourError):
        egbmgf(spec)


def test_egbmgf_rejects_explicit_contour_outside_strip():
    spec = _i1_spec(2.5, 5.0, 0.05, 1.0, 2.0, 0.16)
    with pytest.raises(ContourError):
        egbmgf(spec, ContourSettings(shift1=3.0, shift2=-0.3))


def test_egbmgf_argument_validation():
    with pytest.raises(ValueError):
        _i1_spec(2.5, 5.0, -0.05, 1.0, 2.0, 0.16)


def test_egbmgf_detailed_reports_convergence():
    ev = egbmgf_detailed(_i1_spec(2.5, 5.0, 0.05, 1.0, 2.0, 0.16))
    assert ev.method == "contour"
    assert ev.error <= 1e-6 * abs(ev.value)

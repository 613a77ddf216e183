"""Secrecy metrics of a wiretap link with F-faded main and eavesdropper channels.

Each metric has two evaluation paths: a closed form in terms of Meijer G
kernels and a direct quadrature of the defining integral. They share nothing
beyond the fading model, so each one checks the other.

Metrics (rates in nats, theta = exp(r_s)):

* ASC: E[(ln(1 + g_D) - ln(1 + g_E))^+] = I1 + I2 - I3 with
  I1 = E[ln(1 + g_D) F_E(g_D)], I2 = E[ln(1 + g_E) F_D(g_E)], I3 = E[ln(1 + g_E)];
* SOP: Pr[g_D < theta g_E + theta - 1];
* SOP lower bound: Pr[g_D < theta g_E];
* SPSC: Pr[g_D > g_E].
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from scipy import integrate

from . import fading
from .errors import NumericalError
from .fading import FadingParams
from .specfun import (EgbmgfSpec, Evaluation, GBlock, MeijerGSpec, egbmgf_detailed,
                      meijer_g_detailed)

PERTURBED = "perturbed_parameters"
NEAR_SINGULAR_THETA = "near_singular_theta"
SLOW_CONVERGENCE = "slow_convergence"

_NEAR_SINGULAR = 1e-3
# truncated probability mass at each end of the quadrature range
_TAIL_MASS = 1e-13
_QUAD_ABS_TOL = 1e-12
_QUAD_REL_TOL = 1e-10
_QUAD_LIMIT = 500
_SLOW_REFINEMENTS = 4


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class WiretapScenario:
    main: FadingParams
    eve: FadingParams
    r_s: float = 0.0
    theta: float = field(init=False)

    def __post_init__(self):
        r = float(self.r_s)
        if not (r >= 0 and math.isfinite(r)):
            raise ValueError(f"secrecy rate must be non-negative and finite, got {r}")
        object.__setattr__(self, "r_s", r)
        object.__setattr__(self, "theta", math.exp(r))

    @classmethod
    def from_ratio(cls, m_d: float, m_sd: float, m_e: float, m_se: float, ratio: float,
                   eve_snr: float, r_s: float = 0.0) -> "WiretapScenario":
        """Scenario with gamma_bar_E = ``eve_snr`` and gamma_bar_D = ``ratio * eve_snr`` (linear)."""
        return cls(FadingParams(m_d, m_sd, ratio * eve_snr), FadingParams(m_e, m_se, eve_snr), r_s)

    def with_rate(self, r_s: float) -> "WiretapScenario":
        return WiretapScenario(self.main, self.eve, r_s)

    def swapped(self) -> "WiretapScenario":
        """The same link with the roles of the two receivers exchanged."""
        return WiretapScenario(self.eve, self.main, self.r_s)


@dataclass(frozen=True)
class MetricResult:
    value: float
    method: Method
    abs_error_estimate: float = 0.0
    flags: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("error estimate must be non-negative")
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "abs_error_estimate", float(self.abs_error_estimate))
        object.__setattr__(self, "flags", frozenset(self.flags))


def _log_gamma4(p: FadingParams, q: FadingParams) -> float:
    return math.lgamma(p.m) + math.lgamma(p.m_s) + math.lgamma(q.m) + math.lgamma(q.m_s)


def _flags(*evaluations: Evaluation) -> set[str]:
    out = set()
    for ev in evaluations:
        if ev.perturbed:
            out.add(PERTURBED)
        if ev.refinements >= _SLOW_REFINEMENTS:
            out.add(SLOW_CONVERGENCE)
    return out


# ------------------------------------------------------------ closed forms


def _i1_closed(d: FadingParams, e: FadingParams) -> tuple[float, float, Evaluation]:
    """E[ln(1 + g_D) F_E(g_D)] as a bivariate G-function.

    Writes ln(1 + x) and the incomplete-beta CDF as G kernels and applies the
    Mellin convolution theorem to the product with the density of g_D.
    """
    spec = EgbmgfSpec(
        outer=GBlock(a_top=(1.0 - d.m - e.m,), b_bottom=(d.m_s - e.m,)),
        inner1=GBlock(a_top=(1.0, 1.0), b_bottom=(1.0,), b_rest=(0.0,)),
        inner2=GBlock(a_top=(1.0 - e.m - e.m_s, 1.0 - e.m), b_bottom=(0.0,), b_rest=(-e.m,)),
        x=1.0 / d.xi,
        y=e.xi / d.xi,
    )
    ev = egbmgf_detailed(spec)
    scale = math.exp(e.m * math.log(e.xi / d.xi) - _log_gamma4(d, e))
    return scale * ev.value, scale * ev.error, ev


def _i3_closed(e: FadingParams) -> tuple[float, float, Evaluation]:
    """E[ln(1 + g_E)] as a univariate G^{2,3}_{3,3}."""
    spec = MeijerGSpec(a_top=(1.0 - e.m, 1.0, 1.0), b_bottom=(e.m_s, 1.0), b_rest=(0.0,),
                       argument=1.0 / e.xi)
    ev = meijer_g_detailed(spec)
    scale = math.exp(-math.lgamma(e.m) - math.lgamma(e.m_s))
    return scale * ev.value, scale * ev.error, ev


def asc_closed(s: WiretapScenario) -> MetricResult:
    """Average secrecy capacity (nats) from the closed-form G-function terms."""
    i1, e1, ev1 = _i1_closed(s.main, s.eve)
    i2, e2, ev2 = _i1_closed(s.eve, s.main)
    i3, e3, ev3 = _i3_closed(s.eve)
    return MetricResult(i1 + i2 - i3, Method.CLOSED_FORM, e1 + e2 + e3, _flags(ev1, ev2, ev3))


def _sop_lower_eval(d: FadingParams, e: FadingParams, theta: float) -> tuple[float, float, Evaluation]:
    z = theta * d.xi / e.xi
    spec = MeijerGSpec(a_top=(1.0 - e.m - d.m, 1.0 - d.m - d.m_s, 1.0 - d.m),
                       b_bottom=(e.m_s - d.m, 0.0), b_rest=(-d.m,), argument=z)
    ev = meijer_g_detailed(spec)
    scale = math.exp(d.m * math.log(z) - _log_gamma4(d, e))
    return scale * ev.value, scale * ev.error, ev


def sop_lower_closed(s: WiretapScenario) -> MetricResult:
    """Lower bound Pr[g_D < theta g_E] of the outage probability, closed form."""
    value, err, ev = _sop_lower_eval(s.main, s.eve, s.theta)
    return MetricResult(value, Method.CLOSED_FORM, err, _flags(ev))


def sop_closed(s: WiretapScenario) -> MetricResult:
    """Secrecy outage probability Pr[g_D < theta g_E + theta - 1], closed form.

    The complement Pr[g_D > theta g_E + theta - 1] is a bivariate G-function
    with a Gamma(s + t) outer kernel. The arguments grow like 1/(theta - 1),
    so theta = 1 itself is excluded (use the lower bound there, which is exact).
    """
    d, e, theta = s.main, s.eve, s.theta
    if not theta > 1.0:
        raise ValueError("the closed-form outage probability needs r_s > 0")
    spec = EgbmgfSpec(
        outer=GBlock(a_top=(1.0,)),
        inner1=GBlock(a_top=(1.0 - d.m,), b_bottom=(d.m_s,), b_rest=(0.0,)),
        inner2=GBlock(a_top=(1.0 - e.m,), b_bottom=(0.0, e.m_s)),
        x=1.0 / (d.xi * (theta - 1.0)),
        y=theta / ((theta - 1.0) * e.xi),
    )
    ev = egbmgf_detailed(spec)
    scale = math.exp(-_log_gamma4(d, e))
    flags = _flags(ev)
    if theta < 1.0 + _NEAR_SINGULAR:
        flags.add(NEAR_SINGULAR_THETA)
    return MetricResult(1.0 - scale * ev.value, Method.CLOSED_FORM, scale * ev.error, flags)


def spsc(s: WiretapScenario) -> MetricResult:
    """Probability of strictly positive secrecy capacity, Pr[g_D > g_E].

    Uses the closed-form lower bound at theta = 1, where it is exact, and
    falls back to quadrature when the G-function evaluation fails.
    """
    at_one = s.with_rate(0.0)
    try:
        low = sop_lower_closed(at_one)
    except NumericalError:
        low = sop_lower_quadrature(at_one)
    return replace(low, value=1.0 - low.value)


# -------------------------------------------------------------- quadrature


def _log_bounds(p: FadingParams) -> tuple[float, float]:
    """ln of the SNR range outside which each tail holds less than the truncation mass."""
    log_b = math.lgamma(p.m) + math.lgamma(p.m_s) - math.lgamma(p.m + p.m_s)
    lower = (math.log(_TAIL_MASS * p.m) + log_b) / p.m - math.log(p.xi)
    upper = -(math.log(_TAIL_MASS * p.m_s) + log_b) / p.m_s - math.log(p.xi)
    return lower, upper


def _integrate_log(fn, p: FadingParams) -> tuple[float, float]:
    """Integral over gamma > 0 of fn(gamma) * pdf_p(gamma), on a log scale.

    ``fn`` receives a float and the truncation follows the tails of ``p``.
    """
    lo, hi = _log_bounds(p)
    mode = min(max(-math.log(p.xi), lo), hi)

    def integrand(u):
        g = math.exp(u)
        w = fn(g)
        if w == 0.0:
            return 0.0
        return w * math.exp(u + float(fading.log_pdf(p, g)))

    total, err = 0.0, 0.0
    for a, b in ((lo, mode), (mode, hi)):
        if b > a:
            val, e = integrate.quad(integrand, a, b, epsabs=_QUAD_ABS_TOL, epsrel=_QUAD_REL_TOL,
                                    limit=_QUAD_LIMIT)
            total += val
            err += e
    return total, err + 2 * _TAIL_MASS


def asc_quadrature(s: WiretapScenario) -> MetricResult:
    """Average secrecy capacity (nats) by quadrature of the three defining integrals."""
    d, e = s.main, s.eve
    i1, e1 = _integrate_log(lambda g: math.log1p(g) * fading.cdf(e, g), d)
    i2, e2 = _integrate_log(lambda g: math.log1p(g) * fading.cdf(d, g), e)
    i3, e3 = _integrate_log(math.log1p, e)
    return MetricResult(i1 + i2 - i3, Method.QUADRATURE, e1 + e2 + e3)


def sop_quadrature(s: WiretapScenario) -> MetricResult:
    """Secrecy outage probability by quadrature over the eavesdropper SNR."""
    d, theta = s.main, s.theta
    value, err = _integrate_log(lambda g: fading.cdf(d, theta * g + theta - 1.0), s.eve)
    return MetricResult(value, Method.QUADRATURE, err)


def sop_lower_quadrature(s: WiretapScenario) -> MetricResult:
    """Outage lower bound Pr[g_D < theta g_E] by quadrature over the eavesdropper SNR."""
    d, theta = s.main, s.theta
    value, err = _integrate_log(lambda g: fading.cdf(d, theta * g), s.eve)
    return MetricResult(value, Method.QUADRATURE, err)


def spsc_quadrature(s: WiretapScenario) -> MetricResult:
    """Pr[g_D > g_E] by quadrature of the survival function of g_D."""
    value, err = _integrate_log(lambda g: fading.ccdf(s.main, g), s.eve)
    return MetricResult(value, Method.QUADRATURE, err)


CLOSED_FORMS = {
    "asc": asc_closed,
    "sop": sop_closed,
    "sop_lower": sop_lower_closed,
    "spsc": spsc,
}
QUADRATURES = {
    "asc": asc_quadrature,
    "sop": sop_quadrature,
    "sop_lower": sop_lower_quadrature,
    "spsc": spsc_quadrature,
}
METRICS = tuple(CLOSED_FORMS)


def evaluate(metric: str, s: WiretapScenario, method: Method | str) -> MetricResult:
    """Dispatch ``metric`` to the closed-form or quadrature path."""
    method = Method(method)
    if metric not in CLOSED_FORMS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    if method is Method.CLOSED_FORM:
        return CLOSED_FORMS[metric](s)
    if method is Method.QUADRATURE:
        return QUADRATURES[metric](s)
    raise ValueError("Monte Carlo estimates live in the montecarlo module")


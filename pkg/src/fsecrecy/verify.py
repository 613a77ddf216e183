"""Self-verification suites shared by ``fsecrecy verify`` and the acceptance tests.

Each check returns a :class:`Check` with a pass flag and a one-line detail
string; nothing here raises on a failed comparison.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, stats

from . import fading, montecarlo, secrecy
from .fading import FadingParams
from .montecarlo import SimConfig
from .secrecy import WiretapScenario
from .specfun import (ContourSettings, EgbmgfSpec, GBlock, MeijerGSpec, egbmgf, gamma,
                      gauss_2f1, meijer_g)
from .sweep import preset, scenario_at

EVE_SNR_DB = 5.0

# (m_D, m_sD, m_E, m_sE, lambda in dB, r_s): non-integer m_E and theta >= 1.05 throughout
REGRESSION_GRID = (
    (2.5, 5.0, 1.5, 2.5, 10.0, 1.0),
    (2.5, 5.0, 0.5, 0.5, 6.0, 1.0),
    (2.5, 5.0, 0.5, 50.0, 6.0, 1.0),
    (2.5, 5.0, 2.5, 0.5, 0.0, 2.0),
    (2.5, 5.0, 2.5, 50.0, 20.0, 0.5),
    (1.2, 1.8, 0.7, 3.3, 5.0, 0.05),
    (4.5, 12.0, 3.5, 7.0, 15.0, 1.5),
    (0.8, 0.6, 1.3, 2.2, -5.0, 0.3),
    (6.0, 30.0, 0.5, 1.5, 25.0, 2.0),
    (1.0, 2.0, 1.5, 2.0, 10.0, 1.0),
    (3.2, 1.1, 4.7, 9.1, 12.0, 0.7),
    (2.0, 4.0, 0.9, 0.9, 3.0, 1.2),
)

# parameter triples (m, m_s, gamma_bar) of the distribution checks
FADING_GRID = tuple((m, m_s, g) for m in (0.5, 1.0, 2.5, 5.0, 50.0)
                    for m_s in (0.5, 1.0, 2.5, 5.0, 50.0) for g in (0.5, 3.1623, 10.0))

IDENTITY_SEED = 20250101
MC_SEED = 1
KS_SEED = 2


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def regression_scenarios() -> list[WiretapScenario]:
    eve = 10 ** (EVE_SNR_DB / 10)
    return [WiretapScenario.from_ratio(m_d, m_sd, m_e, m_se, 10 ** (lam / 10), eve, r_s)
            for m_d, m_sd, m_e, m_se, lam, r_s in REGRESSION_GRID]


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


# --------------------------------------------------------------- identities


def check_meijer_identities(count: int = 100, tol: float = 1e-10) -> Check:
    """exp(-x) and Gamma(a)(1 + x)^-a as Meijer G-functions at random arguments."""
    rng = np.random.default_rng(IDENTITY_SEED)
    worst = 0.0
    for x, a in zip(rng.uniform(0.01, 50.0, count), rng.uniform(0.1, 6.0, count)):
        exp_g = meijer_g(MeijerGSpec(b_bottom=(0.0,), argument=x))
        power_g = meijer_g(MeijerGSpec(a_top=(1.0 - a,), b_bottom=(0.0,), argument=x))
        worst = max(worst, _rel(exp_g, math.exp(-x)), _rel(power_g, gamma(a) * (1 + x) ** -a))
    return Check("A8 meijer_g identities", worst < tol, f"max rel err {worst:.2e} (tol {tol:g})")


def check_hyp2f1_log_identity(count: int = 100, tol: float = 1e-10) -> Check:
    """2F1(1, 1; 2; -z) = ln(1 + z) / z at random z."""
    rng = np.random.default_rng(IDENTITY_SEED + 1)
    z = np.concatenate([rng.uniform(0.0, 1.0, count // 2), 10 ** rng.uniform(0, 8, count - count // 2)])
    got = gauss_2f1(1.0, 1.0, 2.0, -z)
    worst = float(np.max(np.abs(got - np.log1p(z) / z) / (np.log1p(z) / z)))
    return Check("A8 2F1 log identity", worst < tol, f"max rel err {worst:.2e} (tol {tol:g})")


def _egbmgf_instances() -> list[EgbmgfSpec]:
    d = FadingParams(2.5, 5.0, 10.0)
    e = FadingParams(1.0, 2.0, 10 ** 0.5)
    theta = math.e
    return [
        EgbmgfSpec(outer=GBlock(a_top=(1 - d.m - e.m,), b_bottom=(d.m_s - e.m,)),
                   inner1=GBlock(a_top=(1.0, 1.0), b_bottom=(1.0,), b_rest=(0.0,)),
                   inner2=GBlock(a_top=(1 - e.m - e.m_s, 1 - e.m), b_bottom=(0.0,), b_rest=(-e.m,)),
                   x=1 / d.xi, y=e.xi / d.xi),
        EgbmgfSpec(outer=GBlock(a_top=(1.0,)),
                   inner1=GBlock(a_top=(1 - d.m,), b_bottom=(d.m_s,), b_rest=(0.0,)),
                   inner2=GBlock(a_top=(1 - e.m,), b_bottom=(0.0, e.m_s)),
                   x=1 / (d.xi * (theta - 1)), y=theta / ((theta - 1) * e.xi)),
    ]


def check_egbmgf_refinement(tol: float = 1e-6) -> Check:
    """EGBMGF values move by less than ``tol`` when truncation and density double."""
    worst = 0.0
    for spec in _egbmgf_instances():
        base = ContourSettings()
        worst = max(worst, _rel(egbmgf(spec, base.doubled()), egbmgf(spec, base)))
    return Check("A8 egbmgf refinement stability", worst < tol, f"max rel drift {worst:.2e} (tol {tol:g})")


def check_symmetric_values(tol: float = 1e-6) -> Check:
    """Identical channels: Pr[g_D > g_E] = Pr[g_D < g_E] = 1/2."""
    worst = 0.0
    for m, m_s, g in ((2.5, 5.0, 3.1623), (0.5, 0.5, 1.0), (1.5, 50.0, 10.0), (5.0, 1.2, 0.5)):
        p = FadingParams(m, m_s, g)
        s = WiretapScenario(p, p, 0.0)
        worst = max(worst, abs(secrecy.spsc(s).value - 0.5),
                    abs(secrecy.sop_lower_closed(s).value - 0.5))
    return Check("A7 symmetric SPSC and SOP^L", worst < tol, f"max |value - 1/2| {worst:.2e} (tol {tol:g})")


def check_nakagami_limit(tol: float = 1e-3) -> Check:
    grid = np.linspace(0.01, 20.0, 2000)
    worst = 0.0
    for m in (1.0, 2.5):
        diff = fading.pdf(FadingParams(m, 1e4, 2.0), grid) - fading.nakagami_limit_pdf(m, 2.0, grid)
        worst = max(worst, float(np.max(np.abs(diff))))
    return Check("A6 Nakagami-m limit", worst < tol, f"sup-norm {worst:.2e} (tol {tol:g})")


def pdf_mass(p: FadingParams) -> float:
    """Quadrature of the density over (0, inf), on a log scale."""
    def integrand(u):
        return math.exp(u + float(fading.log_pdf(p, math.exp(u))))
    center = -math.log(p.xi)
    # both tails decay at least like exp(-min(m, m_s) |u - center|)
    reach = 60.0 / min(p.m, p.m_s)
    total = 0.0
    for a, b in ((center - reach, center), (center, center + reach)):
        total += integrate.quad(integrand, a, b, epsabs=1e-14, epsrel=1e-13, limit=500)[0]
    return total


def check_pdf_normalization(tol: float = 1e-8) -> Check:
    worst = max(abs(pdf_mass(FadingParams(*t)) - 1.0) for t in FADING_GRID)
    return Check("A5 pdf normalization", worst < tol,
                 f"max |mass - 1| {worst:.2e} over {len(FADING_GRID)} triples (tol {tol:g})")


# --------------------------------------------------------------- regression


def fig1_ratios() -> dict[str, float]:
    """ASC(m_sE = 50) / ASC(m_sE = 0.5) at lambda = 6 read as dB and as a linear ratio."""
    eve = 10 ** (EVE_SNR_DB / 10)
    out = {}
    for unit, lam in (("dB", 10 ** 0.6), ("linear", 6.0)):
        heavy, light = (secrecy.asc_closed(WiretapScenario.from_ratio(2.5, 5.0, 0.5, m_se, lam, eve)).value
                        for m_se in (50.0, 0.5))
        out[unit] = heavy / light
    return out


def check_fig1_ratio(lo: float = 1.15, hi: float = 1.35) -> Check:
    ratios = fig1_ratios()
    matching = [u for u, r in ratios.items() if lo <= r <= hi]
    detail = ", ".join(f"{u}: {r:.4f}" for u, r in ratios.items())
    return Check("A1 fig1 ASC ratio", bool(matching),
                 f"{detail}; in [{lo}, {hi}] for {matching or 'no reading'}")


def check_outage_ordering(slack: float = 1e-6) -> Check:
    """SOP >= SOP^L on the full fig2 and fig4 preset grids."""
    worst = math.inf
    points = 0
    for name in ("fig2", "fig4"):
        cfg = preset(name)
        for lam in cfg.lambda_grid:
            for sc in cfg.scenarios:
                s = scenario_at(cfg, lam, sc)
                gap = secrecy.sop_closed(s).value - secrecy.sop_lower_closed(s).value
                worst = min(worst, gap)
                points += 1
    return Check("A2 SOP >= SOP^L", worst >= -slack,
                 f"min SOP - SOP^L {worst:.2e} over {points} points (slack {slack:g})")


def check_path_equivalence(tol: float = 1e-4) -> Check:
    worst = {"asc": 0.0, "sop": 0.0, "sop_lower": 0.0}
    for s in regression_scenarios():
        for metric in worst:
            closed = secrecy.evaluate(metric, s, "closed_form").value
            quad = secrecy.evaluate(metric, s, "quadrature").value
            worst[metric] = max(worst[metric], _rel(closed, quad))
    detail = ", ".join(f"{k}: {v:.2e}" for k, v in worst.items())
    return Check("A3 closed form vs quadrature", max(worst.values()) < tol,
                 f"max rel diff {detail} (tol {tol:g})")


# --------------------------------------------------------------- full scale


def check_monte_carlo(n: int = 10**7, seed: int = MC_SEED, sigmas: float = 3.0) -> Check:
    worst = 0.0
    where = ""
    for i, s in enumerate(regression_scenarios()):
        est = montecarlo.simulate(s, SimConfig(n_samples=n, seed=seed), ("asc", "sop", "sop_lower", "spsc"))
        for metric, e in est.items():
            closed = secrecy.evaluate(metric, s, "closed_form").value
            z = abs(closed - e.mean) / e.std_error if e.std_error > 0 else (0.0 if closed == e.mean else math.inf)
            if z > worst:
                worst, where = z, f"scenario {i} {metric}"
    return Check("A4 Monte Carlo gate", worst <= sigmas,
                 f"max |closed - mc| / se = {worst:.2f} at {where} (n={n}, limit {sigmas:g})")


def ks_statistic(p: FadingParams, n: int, seed: int) -> float:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    draws = fading.sample(p, rng, n)
    return float(stats.kstest(draws, lambda g: fading.cdf(p, g)).statistic)


def check_sampler_ks(n: int = 10**6, limit: float = 0.002) -> Check:
    worst = max(ks_statistic(FadingParams(*t), n, KS_SEED + i) for i, t in enumerate(FADING_GRID))
    return Check("A5 sampler KS", worst < limit,
                 f"max KS {worst:.5f} over {len(FADING_GRID)} triples (n={n}, limit {limit:g})")


SUITES: dict[str, tuple[Callable[[], Check], ...]] = {
    "identities": (check_meijer_identities, check_hyp2f1_log_identity, check_egbmgf_refinement,
                   check_symmetric_values, check_nakagami_limit, check_pdf_normalization),
    "regression": (check_fig1_ratio, check_outage_ordering, check_path_equivalence),
    "paper-scale": (check_monte_carlo, check_sampler_ks),
}


def run_suite(name: str, report: Callable[[str], None] | None = None) -> list[Check]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {tuple(SUITES)}")
    results = []
    for fn in SUITES[name]:
        start = time.perf_counter()
        check = fn()
        results.append(check)
        if report is not None:
            status = "PASS" if check.passed else "FAIL"
            report(f"{status}  {check.name:34s} {check.detail}  [{time.perf_counter() - start:.1f} s]")
    return results

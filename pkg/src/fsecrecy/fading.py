"""Fisher-Snedecor F fading model of the instantaneous SNR.

The density is parameterized by the multipath index ``m``, the shadowing
shape ``m_s`` and the SNR scale ``gamma_bar``; everything enters through
``xi = m / (m_s * gamma_bar)``. Note that ``gamma_bar`` is *not* the mean SNR:
the mean is ``gamma_bar * m_s / (m_s - 1)`` and is infinite for ``m_s <= 1``.
All SNRs here are linear; dB conversion belongs to the command line.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import gauss_2f1, log_beta, log_gamma


class ChannelRole(enum.Enum):
    D = "D"  # legitimate receiver
    E = "E"  # eavesdropper


@dataclass(frozen=True)
class FadingParams:
    m: float
    m_s: float
    gamma_bar: float
    xi: float = field(init=False)

    def __post_init__(self):
        for name in ("m", "m_s", "gamma_bar"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "xi", self.m / (self.m_s * self.gamma_bar))

    @classmethod
    def from_db(cls, m: float, m_s: float, gamma_bar_db: float) -> "FadingParams":
        return cls(m, m_s, db_to_linear(gamma_bar_db))

    def with_gamma_bar(self, gamma_bar: float) -> "FadingParams":
        return FadingParams(self.m, self.m_s, gamma_bar)


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0) if np.ndim(db) else 10.0 ** (float(db) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def log_pdf(p: FadingParams, gamma):
    """Natural log of the density; ``-inf`` at gamma = 0 when m > 1."""
    g = np.asarray(gamma, dtype=float)
    with np.errstate(divide="ignore"):
        out = (p.m * math.log(p.xi) - log_beta(p.m, p.m_s) + (p.m - 1.0) * np.log(g)
               - (p.m + p.m_s) * np.log1p(p.xi * g))
    return out


def pdf(p: FadingParams, gamma):
    """Density of the instantaneous SNR at ``gamma`` (scalar or array)."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(np.isnan(g)):
        raise ValueError("SNR must be non-negative")
    if p.m < 1.0 and np.any(g == 0):
        raise ValueError("density diverges at gamma = 0 for m < 1")
    if p.m == 1.0:
        out = np.exp(math.log(p.xi) - log_beta(1.0, p.m_s) - (1.0 + p.m_s) * np.log1p(p.xi * g))
    else:
        out = np.exp(log_pdf(p, g))
    return float(out) if np.ndim(gamma) == 0 else out


def cdf(p: FadingParams, gamma):
    """Distribution function at ``gamma`` via the Gauss hypergeometric form."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(np.isnan(g)):
        raise ValueError("SNR must be non-negative")
    scalar = np.ndim(gamma) == 0
    g = np.atleast_1d(g)
    out = np.where(np.isinf(g), 1.0, 0.0)
    pos = (g > 0) & np.isfinite(g)
    if np.any(pos):
        z = p.xi * g[pos]
        # (xi g)^m 2F1(.; -xi g) = (xi g / (1 + xi g))^m [(1 + xi g)^m 2F1(.; -xi g)]
        log_pref = p.m * (np.log(z) - np.log1p(z)) - math.log(p.m) - log_beta(p.m, p.m_s)
        hyp = gauss_2f1(p.m + p.m_s, p.m, 1.0 + p.m, -z, scale_power=p.m)
        out[pos] = np.exp(log_pref) * hyp
    if np.any(out < -1e-9) or np.any(out > 1 + 1e-9):
        raise ArithmeticError("CDF left [0, 1] beyond round-off")
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out


def reflected(p: FadingParams) -> FadingParams:
    """Model of 1/gamma: the roles of m and m_s swap and xi is inverted."""
    return FadingParams(p.m_s, p.m, p.m_s * p.xi / p.m)


def ccdf(p: FadingParams, gamma):
    """Survival function 1 - cdf without cancellation in the upper tail."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(np.isnan(g)):
        raise ValueError("SNR must be non-negative")
    with np.errstate(divide="ignore"):
        inv = 1.0 / g
    out = cdf(reflected(p), inv)
    return float(out) if np.ndim(gamma) == 0 else out


def mean_snr(p: FadingParams) -> float:
    """Mean SNR ``gamma_bar * m_s / (m_s - 1)``; ``math.inf`` when it does not exist."""
    if p.m_s <= 1.0:
        return math.inf
    return p.gamma_bar * p.m_s / (p.m_s - 1.0)


def sample(p: FadingParams, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw ``n`` SNR values as (X / Y) / xi with X ~ Gamma(m), Y ~ Gamma(m_s)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    x = rng.standard_gamma(p.m, size=n)
    y = rng.standard_gamma(p.m_s, size=n)
    return (x / y) / p.xi


def nakagami_limit_pdf(m: float, gamma_bar: float, gamma):
    """Gamma density of the Nakagami-m SNR, the m_s -> infinity limit of the model."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g <= 0):
        raise ValueError("gamma must be positive")
    lg, _ = log_gamma(m)
    out = np.exp(m * math.log(m / gamma_bar) + (m - 1.0) * np.log(g) - m * g / gamma_bar - lg)
    return float(out) if np.ndim(gamma) == 0 else out

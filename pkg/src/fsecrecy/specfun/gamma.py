"""Log-gamma and beta functions over real arguments."""
from __future__ import annotations

import math

from scipy import special

from ..errors import PoleError


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign(Gamma(x)))``.

    Raises PoleError at the non-positive integers.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"log_gamma needs a finite argument, got {x}")
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x}")
    return math.lgamma(x), int(special.gammasgn(x))


def gamma(x: float) -> float:
    value, sign = log_gamma(x)
    return sign * math.exp(value)


def rgamma(x: float) -> float:
    """1/Gamma(x); zero at the poles of Gamma."""
    return float(special.rgamma(x))


def log_beta(a: float, b: float) -> float:
    if a <= 0 or b <= 0:
        raise ValueError(f"beta needs positive arguments, got ({a}, {b})")
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta(a: float, b: float) -> float:
    """Euler beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b) for a, b > 0."""
    return math.exp(log_beta(a, b))


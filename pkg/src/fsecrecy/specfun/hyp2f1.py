"""Gauss hypergeometric function 2F1(a, b; c; z) on the non-positive real axis.

Every call site in this package has z <= 0, so the evaluator is restricted to
that half-line. The strategy:

* ``|z| <= 1/2``: the defining power series, accepted when it does not suffer
  from cancellation between alternating terms;
* otherwise the Pfaff transformation maps z to w = z/(z-1) in [0, 1);
* when the series in w would need too many terms (w close to 1) the function is continued
  to 1 - w with the standard connection formulas, including the logarithmic
  ones when c - a - b is an integer.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from ..errors import ConvergenceError, PoleError

_EPS = 1e-17
_MAX_TERMS = 200_000
_MAX_SERIES_TERMS = 400
_DIRECT_RADIUS = 0.5
# largest tolerated ratio between the biggest term and the sum of a series
_CANCELLATION_LIMIT = 1e4
_INTEGER_TOL = 1e-9


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and abs(x - round(x)) < 1e-14


def _near_integer(x: float) -> bool:
    return abs(x - round(x)) < _INTEGER_TOL


def _gamma_ratio(num: list[float], den: list[float]) -> float:
    """prod Gamma(num) / prod Gamma(den); poles in ``den`` give zero."""
    if any(_is_nonpositive_integer(x) for x in den):
        return 0.0
    for x in num:
        if _is_nonpositive_integer(x):
            raise PoleError(f"Gamma pole at {x} in connection coefficient")
    log_mag = sum(math.lgamma(x) for x in num) - sum(math.lgamma(x) for x in den)
    sign = 1.0
    for x in list(num) + list(den):
        sign *= special.gammasgn(x)
    return sign * math.exp(log_mag)


def _series(a: float, b: float, c: float, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Kahan-summed power series of 2F1 for |z| < 1.

    Returns the sums and, per element, the largest absolute term seen
    (used to detect cancellation). Converged elements leave the working set.
    """
    z = np.asarray(z, dtype=float)
    result = np.ones_like(z)
    biggest_out = np.ones_like(z)
    idx = np.arange(z.size)
    zz = z.ravel().copy()
    total = np.ones_like(zz)
    comp = np.zeros_like(zz)
    term = np.ones_like(zz)
    biggest = np.ones_like(zz)
    for k in range(_MAX_TERMS):
        coef = (a + k) * (b + k) / ((c + k) * (k + 1))
        if coef == 0.0:
            break
        term = term * (coef * zz)
        # Kahan step
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        biggest = np.maximum(biggest, np.abs(term))
        # bound the tail by a geometric series once terms shrink
        ratio = abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2))) * np.abs(zz)
        with np.errstate(divide="ignore", invalid="ignore"):
            done = (ratio < 1.0) & (np.abs(term) * ratio <= _EPS * (1.0 - ratio) * np.abs(total))
        if np.any(done):
            result.flat[idx[done]] = total[done]
            biggest_out.flat[idx[done]] = biggest[done]
            keep = ~done
            idx, zz, total, comp, term, biggest = (idx[keep], zz[keep], total[keep],
                                                   comp[keep], term[keep], biggest[keep])
            if idx.size == 0:
                return result, biggest_out
    else:
        raise ConvergenceError(f"2F1 series ({a}, {b}; {c}) did not converge in {_MAX_TERMS} terms")
    result.flat[idx] = total
    biggest_out.flat[idx] = biggest
    return result, biggest_out


def _terminating_at_one(n: int, b: float, c: float, v: np.ndarray) -> np.ndarray:
    """2F1(-n, b; c; 1 - v) re-expanded as a polynomial in v.

    Uses 2F1(-n,b;c;x) = (c-b)_n/(c)_n 2F1(-n, b; b-c-n+1; 1-x); valid when the
    new lower parameter does not vanish before the series terminates.
    """
    lower = b - c - n + 1
    if _is_nonpositive_integer(lower) and -round(lower) < n:
        raise ConvergenceError("terminating re-expansion is singular")
    prefactor = 1.0
    for k in range(n):
        prefactor *= (c - b + k) / (c + k)
    total = np.ones_like(v)
    comp = np.zeros_like(v)
    term = np.ones_like(v)
    for k in range(n):
        term = term * ((-n + k) * (b + k) / ((lower + k) * (k + 1)) * v)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return prefactor * total


def _log_connection(a: float, b: float, m: int, v: np.ndarray) -> np.ndarray:
    """2F1(a, b; a+b+m; 1 - v) for integer m >= 0 and small v (logarithmic case)."""
    c = a + b + m
    logv = np.log(v)
    result = np.zeros_like(v)
    if m > 0:
        coef = _gamma_ratio([m, c], [a + m, b + m])
        finite = np.zeros_like(v)
        term = np.ones_like(v)
        for n in range(m):
            finite = finite + term
            if n + 1 < m:
                term = term * ((a + n) * (b + n) / ((n + 1) * (1 - m + n)) * v)
        result = coef * finite
    coef = _gamma_ratio([c], [a, b])
    if coef == 0.0:
        return result
    total = np.zeros_like(v)
    comp = np.zeros_like(v)
    # (a+m)_n (b+m)_n / (n! (n+m)!) v^n
    poch = np.full_like(v, 1.0 / math.factorial(m))
    for n in range(_MAX_TERMS):
        bracket = (logv - special.digamma(n + 1) - special.digamma(n + m + 1)
                   + special.digamma(a + n + m) + special.digamma(b + n + m))
        term = poch * bracket
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        poch = poch * ((a + m + n) * (b + m + n) / ((n + 1) * (n + m + 1)) * v)
        if n > 2 and np.all(np.abs(poch) * (np.abs(logv) + 10 + math.log(n + m + 2))
                            <= _EPS * np.abs(total)):
            break
    else:
        raise ConvergenceError("logarithmic connection series did not converge")
    sign = -1.0 if m % 2 else 1.0
    return result - sign * coef * v**m * total


def _connection(a: float, b: float, c: float, w: np.ndarray, v: np.ndarray,
                power: float = 0.0) -> np.ndarray:
    """v**power * 2F1(a, b; c; w) for w near 1, continued to the variable v = 1 - w.

    The external power is folded into the connection terms so that large
    prefactors and large hypergeometric values never meet in floating point.
    """
    s = c - a - b
    if _near_integer(s):
        m = int(round(s))
        if m < 0:
            # Euler transformation flips the sign of c - a - b
            return v ** (power + m) * _connection_integer(c - a, c - b, -m, w, v)
        return v**power * _connection_integer(a, b, m, w, v)
    first = _gamma_ratio([c, s], [c - a, c - b])
    second = _gamma_ratio([c, -s], [a, b])
    out = np.zeros_like(w)
    if first != 0.0:
        out = out + first * v**power * _series(a, b, 1.0 - s, v)[0]
    if second != 0.0:
        out = out + second * v ** (power + s) * _series(c - a, c - b, 1.0 + s, v)[0]
    return out


def _connection_integer(a: float, b: float, m: int, w: np.ndarray, v: np.ndarray) -> np.ndarray:
    c = a + b + m
    for top, other in ((a, b), (b, a)):
        if _is_nonpositive_integer(top):
            n = -int(round(top))
            if m == 0 or n < m:
                return _terminating_at_one(n, other, c, v)
            # polynomial whose re-expansion at 1 is singular: sum it directly
            return _series(a, b, c, w)[0]
    return _log_connection(a, b, m, v)


def _pfaff(a: float, b: float, c: float, z: np.ndarray, scale: float = 0.0) -> np.ndarray:
    """(1-z)**scale * 2F1 for z <= 0 through w = z/(z-1), picking the better-conditioned form."""
    v = 1.0 / (1.0 - z)
    w = -z * v
    # form 1: (1-z)^-a 2F1(a, c-b; c; w); form 2 swaps the roles of a and b
    negatives_1 = (a < 0) + (c - b < 0)
    negatives_2 = (b < 0) + (c - a < 0)
    if negatives_2 < negatives_1:
        a, b = b, a
    p, q = a, c - b
    out = np.empty_like(z)
    # rough term count of the series in w; continue to 1 - w when it is large
    growth = max(p + q - c - 1.0, 0.0) + 40.0
    with np.errstate(divide="ignore"):
        low = growth < -_MAX_SERIES_TERMS * np.log(w)
    if np.any(low):
        out[low] = v[low] ** (a - scale) * _series(p, q, c, w[low])[0]
    if np.any(~low):
        out[~low] = _connection(p, q, c, w[~low], v[~low], power=a - scale)
    return out


def gauss_2f1(a: float, b: float, c: float, z, method: str = "auto", scale_power: float = 0.0):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real parameters and z <= 0.

    ``z`` may be a scalar or an array. ``method`` selects the route: ``"direct"``
    (power series, |z| < 1 only), ``"pfaff"`` or ``"auto"``. A nonzero
    ``scale_power`` returns ``(1 - z)**scale_power * 2F1(...)``, which keeps
    results representable when the function itself under- or overflows.
    """
    if _is_nonpositive_integer(c):
        raise PoleError(f"2F1 undefined for c = {c}")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(~np.isfinite(z)):
        raise ValueError("2F1 argument must be finite")
    if np.any(z > 0):
        raise ValueError("gauss_2f1 is restricted to z <= 0")
    if method not in ("auto", "direct", "pfaff"):
        raise ValueError(f"unknown method {method!r}")

    out = np.ones_like(z)
    nonzero = z != 0
    if method == "direct":
        if np.any(z <= -1):
            raise ValueError("direct series needs |z| < 1")
        out[nonzero] = (1.0 - z[nonzero]) ** scale_power * _series(a, b, c, z[nonzero])[0]
    elif method == "pfaff":
        out[nonzero] = _pfaff(a, b, c, z[nonzero], scale_power)
    else:
        near = nonzero & (z >= -_DIRECT_RADIUS)
        far = nonzero & ~near
        if np.any(near):
            vals, biggest = _series(a, b, c, z[near])
            bad = biggest > _CANCELLATION_LIMIT * np.abs(vals)
            vals = (1.0 - z[near]) ** scale_power * vals
            if np.any(bad):
                vals[bad] = _pfaff(a, b, c, z[near][bad], scale_power)
            out[near] = vals
        if np.any(far):
            out[far] = _pfaff(a, b, c, z[far], scale_power)
    return float(out[0]) if scalar else out

"""Univariate Meijer G-function for real parameters and a positive argument.

Conventions follow the usual Mellin-Barnes definition

    G^{m,n}_{p,q}(x) = 1/(2 pi i) \\int Phi(s) x^s ds,

    Phi(s) = prod_{j<=m} Gamma(b_j - s) prod_{j<=n} Gamma(1 - a_j + s)
             / (prod_{j>m} Gamma(1 - b_j + s) prod_{j>n} Gamma(a_j - s)),

with the contour separating the poles of Gamma(b_j - s) (to its right) from
those of Gamma(1 - a_j + s) (to its left).

Two evaluation routes are available. The residue route sums the poles of
Gamma(b_j - s) (Slater's theorem); coincident poles are split by a symmetric
parameter perturbation whose first-order error cancels. The contour route
applies the trapezoidal rule on a truncated vertical line, which is
spectrally accurate for these analytic, exponentially decaying integrands
and needs no special treatment of coincident poles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import optimize, special

from ..errors import ContourError, ConvergenceError, DegenerateParameterError, PoleError

_SERIES_EPS = 1e-17
_MAX_SERIES_TERMS = 20_000
_POLE_TOL = 1e-7
PERTURBATION = 1e-5
# residue sums losing more than this factor to cancellation are rejected in "auto" mode
_CANCELLATION_LIMIT = 1e5


def _as_tuple(values: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class GBlock:
    """Parameter lists of a G^{m,n}_{p,q} kernel, without the argument."""

    a_top: tuple[float, ...] = ()
    a_rest: tuple[float, ...] = ()
    b_bottom: tuple[float, ...] = ()
    b_rest: tuple[float, ...] = ()

    def __post_init__(self):
        for name in ("a_top", "a_rest", "b_bottom", "b_rest"):
            object.__setattr__(self, name, _as_tuple(getattr(self, name)))
        if self.p > 4 or self.q > 4:
            raise ValueError(f"G^{{{self.m},{self.n}}}_{{{self.p},{self.q}}} exceeds p, q <= 4")
        if any(not math.isfinite(v) for v in self.a_top + self.a_rest + self.b_bottom + self.b_rest):
            raise ValueError("Meijer G parameters must be finite")

    @property
    def m(self) -> int:
        return len(self.b_bottom)

    @property
    def n(self) -> int:
        return len(self.a_top)

    @property
    def p(self) -> int:
        return len(self.a_top) + len(self.a_rest)

    @property
    def q(self) -> int:
        return len(self.b_bottom) + len(self.b_rest)

    @property
    def decay(self) -> float:
        """Exponential decay rate (in units of pi) of the kernel along vertical lines."""
        return self.m + self.n - 0.5 * (self.p + self.q)

    def strip(self) -> tuple[float, float]:
        """Open interval of contour abscissae separating the two pole families."""
        left = max(self.a_top) - 1.0 if self.a_top else -math.inf
        right = min(self.b_bottom) if self.b_bottom else math.inf
        return left, right

    def log_kernel(self, s):
        """Complex logarithm of Phi(s) (branch irrelevant after exponentiation)."""
        s = np.asarray(s, dtype=complex)
        out = np.zeros_like(s)
        for b in self.b_bottom:
            out += special.loggamma(b - s)
        for a in self.a_top:
            out += special.loggamma(1.0 - a + s)
        for b in self.b_rest:
            out -= special.loggamma(1.0 - b + s)
        for a in self.a_rest:
            out -= special.loggamma(a - s)
        return out

    def log_abs_kernel_real(self, c: float) -> float:
        """ln|Phi(c)| for real c (used to place contours)."""
        total = 0.0
        for b in self.b_bottom:
            total += math.lgamma(b - c)
        for a in self.a_top:
            total += math.lgamma(1.0 - a + c)
        for b in self.b_rest:
            total -= _lgamma_or_inf(1.0 - b + c)
        for a in self.a_rest:
            total -= _lgamma_or_inf(a - c)
        return total

    def inverted(self) -> "GBlock":
        """Parameters of G^{n,m}_{q,p}(1/x | 1-b; 1-a), equal to G^{m,n}_{p,q}(x | a; b)."""
        return GBlock(
            a_top=tuple(1.0 - b for b in self.b_bottom),
            a_rest=tuple(1.0 - b for b in self.b_rest),
            b_bottom=tuple(1.0 - a for a in self.a_top),
            b_rest=tuple(1.0 - a for a in self.a_rest),
        )


def _lgamma_or_inf(x: float) -> float:
    if x <= 0 and float(x).is_integer():
        return math.inf
    return math.lgamma(x)


@dataclass(frozen=True)
class MeijerGSpec(GBlock):
    """A G^{m,n}_{p,q} kernel together with its (positive) argument."""

    argument: float = field(kw_only=True)

    def __post_init__(self):
        super().__post_init__()
        x = float(self.argument)
        if not (x > 0 and math.isfinite(x)):
            raise ValueError(f"Meijer G argument must be positive and finite, got {x}")
        object.__setattr__(self, "argument", x)

    @property
    def block(self) -> GBlock:
        return GBlock(self.a_top, self.a_rest, self.b_bottom, self.b_rest)


@dataclass(frozen=True)
class ContourSettings:
    """Truncation and density of the trapezoidal rule on vertical contours."""

    half_width: float = 40.0
    nodes_per_unit: int = 32
    shift1: float | None = None
    shift2: float | None = None
    max_refinements: int = 6
    rel_tol: float = 1e-6

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.nodes_per_unit < 8:
            raise ValueError("nodes_per_unit must be at least 8")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be at least 1")

    def doubled(self) -> "ContourSettings":
        return ContourSettings(2 * self.half_width, 2 * self.nodes_per_unit, self.shift1,
                               self.shift2, self.max_refinements, self.rel_tol)


@dataclass(frozen=True)
class Evaluation:
    """A value with the diagnostics of how it was obtained."""

    value: float
    error: float
    method: str
    perturbed: bool = False
    refinements: int = 0


# ---------------------------------------------------------------- residues


def _clusters(values: Sequence[float]) -> bool:
    """True when two entries differ by (nearly) an integer."""
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            d = values[i] - values[j]
            if abs(d - round(d)) < _POLE_TOL:
                return True
    return False


def _slater_sum(block: GBlock, x: float) -> tuple[float, float]:
    """Residue sum over the poles of Gamma(b_j - s); assumes simple poles.

    Returns the value and the largest absolute partial contribution, which
    measures cancellation.
    """
    a_all = block.a_top + block.a_rest
    b_all = block.b_bottom + block.b_rest
    sign_arg = -x if (block.p - block.m - block.n) % 2 else x
    if block.p == block.q and abs(x) >= 1.0:
        raise ConvergenceError("residue series of a p = q kernel needs x < 1")
    total = 0.0
    biggest = 0.0
    for h, bh in enumerate(block.b_bottom):
        num = [b - bh for j, b in enumerate(block.b_bottom) if j != h]
        num += [1.0 + bh - a for a in block.a_top]
        den = [1.0 + bh - b for b in block.b_rest] + [a - bh for a in block.a_rest]
        if any(v <= 0 and float(v).is_integer() for v in num):
            raise PoleError("coincident poles in residue sum")
        if any(v <= 0 and float(v).is_integer() for v in den):
            continue  # 1/Gamma vanishes: this family contributes nothing
        log_c = sum(math.lgamma(v) for v in num) - sum(math.lgamma(v) for v in den)
        sign_c = 1.0
        for v in num + den:
            sign_c *= special.gammasgn(v)
        scale = sign_c * math.exp(log_c + bh * math.log(x))
        tops = [1.0 + bh - a for a in a_all]
        bots = [1.0 + bh - b for j, b in enumerate(b_all) if j != h]
        series, comp, term, big = 1.0, 0.0, 1.0, 1.0
        # past this index every factor of the term ratio is positive and monotone
        settle = max([-t for t in tops + bots if t < 0], default=0.0) + 2
        for k in range(_MAX_SERIES_TERMS):
            num_k = 1.0
            for t in tops:
                num_k *= t + k
            if num_k == 0.0:
                break
            den_k = float(k + 1)
            for t in bots:
                den_k *= t + k
            term *= num_k / den_k * sign_arg
            y = term - comp
            tmp = series + y
            comp = (tmp - series) - y
            series = tmp
            big = max(big, abs(term))
            # geometric bound on the tail once the term ratio drops below one
            ratio = abs(math.prod(t + k + 1 for t in tops)
                        / (math.prod(t + k + 1 for t in bots) * (k + 2)) * x)
            if k > settle and ratio < 1.0 and abs(term) * ratio / (1.0 - ratio) <= _SERIES_EPS * abs(series):
                break
        else:
            raise ConvergenceError("residue series did not converge")
        total += scale * series
        biggest = max(biggest, abs(scale) * big)
    return total, biggest


def _shifted(block: GBlock, eps: float) -> GBlock:
    return GBlock(block.a_top, block.a_rest,
                  tuple(b + j * eps for j, b in enumerate(block.b_bottom)), block.b_rest)


def _residue_eval(block: GBlock, x: float, eps: float = PERTURBATION) -> Evaluation:
    """Residue route, using the inversion formula when x is outside the series domain."""
    if block.p > block.q or (block.p == block.q and x > 1.0):
        block, x = block.inverted(), 1.0 / x
    if block.p == block.q and x == 1.0:
        raise ConvergenceError("residue series does not converge at unit argument")
    if not _clusters(block.b_bottom):
        value, biggest = _slater_sum(block, x)
        return Evaluation(value, biggest * 1e-16, "series")
    # symmetric perturbation: the O(eps) error terms cancel in the average
    lo, big_lo = _slater_sum(_shifted(block, -eps), x)
    hi, big_hi = _slater_sum(_shifted(block, eps), x)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DegenerateParameterError("perturbed residue sums are not finite")
    value = 0.5 * (lo + hi)
    error = abs(hi - lo) * eps + max(big_lo, big_hi) * 1e-16
    return Evaluation(value, error, "series", perturbed=True)


# ---------------------------------------------------------------- contour


def _place_abscissa(block: GBlock, x: float, shift: float | None) -> float:
    left, right = block.strip()
    if shift is not None:
        if not left < shift < right:
            raise ContourError(f"abscissa {shift} outside the strip ({left}, {right})")
        return float(shift)
    if right - left < 2 * _POLE_TOL:
        raise ContourError(f"pole families overlap: strip ({left}, {right})")
    if math.isfinite(left) and math.isfinite(right):
        return 0.5 * (left + right)
    # half-infinite strip: stay one unit inside and move towards the saddle of |Phi(c) x^c|
    logx = math.log(x)

    def magnitude(c: float) -> float:
        return block.log_abs_kernel_real(c) + c * logx

    if math.isfinite(left):
        lo, hi = left + 1.0, left + 1.0 + 200.0
    elif math.isfinite(right):
        lo, hi = right - 1.0 - 200.0, right - 1.0
    else:
        lo, hi = -100.0, 100.0
    res = optimize.minimize_scalar(magnitude, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-3})
    return float(res.x)


def _trapezoid_line(block: GBlock, x: float, c: float, half_width: float, nodes_per_unit: int):
    """Trapezoid estimate of the line integral and the relative size of its end values."""
    h = 1.0 / nodes_per_unit
    count = int(round(half_width * nodes_per_unit))
    tau = h * np.arange(0, count + 1)
    s = c + 1j * tau
    logf = block.log_kernel(s) + s * math.log(x)
    peak = float(np.max(logf.real))
    f = np.exp(logf - peak)
    # conjugate symmetry of the kernel: the integral is twice the half-line real part
    total = f[0].real + 2.0 * np.sum(f[1:].real)
    value = h / (2.0 * math.pi) * total * math.exp(peak)
    edge = float(np.abs(f[-1]))
    return value, edge


def _contour_eval(block: GBlock, x: float, settings: ContourSettings, tol: float) -> Evaluation:
    if block.decay <= 0:
        raise ContourError("kernel does not decay along vertical lines")
    c = _place_abscissa(block, x, settings.shift1)
    half_width, nodes = settings.half_width, settings.nodes_per_unit
    prev = None
    for it in range(settings.max_refinements + 1):
        value, edge = _trapezoid_line(block, x, c, half_width, nodes)
        if edge > 1e-17:
            half_width *= 2
            continue
        if prev is not None and abs(value - prev) <= tol * abs(value):
            return Evaluation(value, abs(value - prev), "contour", refinements=it)
        prev = value
        nodes *= 2
    raise ConvergenceError(f"contour quadrature did not reach relative {tol}")


# ---------------------------------------------------------------- public


def meijer_g_detailed(spec: MeijerGSpec, method: str = "auto",
                      settings: ContourSettings | None = None) -> Evaluation:
    """Evaluate G^{m,n}_{p,q} with diagnostics.

    ``method`` is ``"series"`` (residues, perturbing coincident poles),
    ``"contour"`` (trapezoidal Mellin-Barnes quadrature) or ``"auto"``, which
    takes the residue sum when it is well conditioned and the contour
    otherwise.
    """
    block, x = spec.block, spec.argument
    left, right = block.strip()
    for a in block.a_top:
        for b in block.b_bottom:
            d = a - b
            if d > 0.5 and abs(d - round(d)) < _POLE_TOL:
                raise PoleError(f"a_j - b_k = {d} is a positive integer: G undefined")
    settings = settings or ContourSettings(rel_tol=1e-11)
    if method == "series":
        return _residue_eval(block, x)
    if method == "contour":
        return _contour_eval(block, x, settings, settings.rel_tol)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")

    contour_ok = block.decay > 0 and right - left > 2 * _POLE_TOL
    equal_pq = block.p == block.q
    near_unit = equal_pq and 0.5 < x < 2.0
    series_block = block.inverted() if (block.p > block.q or (equal_pq and x > 1)) else block
    degenerate = _clusters(series_block.b_bottom)
    if contour_ok and (near_unit or degenerate):
        return _contour_eval(block, x, settings, settings.rel_tol)
    try:
        ev = _residue_eval(block, x)
    except (ConvergenceError, PoleError, DegenerateParameterError):
        if not contour_ok:
            raise
        return _contour_eval(block, x, settings, settings.rel_tol)
    if contour_ok and ev.error > 1e-16 * _CANCELLATION_LIMIT * abs(ev.value):
        return _contour_eval(block, x, settings, settings.rel_tol)
    return ev


def meijer_g(spec: MeijerGSpec, method: str = "auto",
             settings: ContourSettings | None = None) -> float:
    """Value of the Meijer G-function described by ``spec``."""
    return meijer_g_detailed(spec, method, settings).value

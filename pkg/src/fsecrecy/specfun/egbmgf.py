"""Extended generalized bivariate Meijer G-function (EGBMGF).

With three G kernels (an outer one coupling the two integration variables
and two inner ones) the function is the double Mellin-Barnes integral

    G(x, y) = 1/(2 pi i)^2 \\iint Phi_o(s + t) Phi_1(s) Phi_2(t) x^s y^t ds dt,

where each Phi is the kernel of :class:`GBlock`. This is the form produced
by integrating a product of three Meijer G-functions against a power of the
integration variable.

Both contours are vertical lines sampled with the same step, so the outer
kernel only needs to be evaluated on the sums s + t, which lie on a single
line; the double sum collapses to a discrete convolution of the two inner
sequences weighted by the outer one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, signal

from ..errors import ContourError, ConvergenceError
from .meijer import ContourSettings, Evaluation, GBlock

_EDGE_TOL = 1e-15
_MIN_MARGIN = 1e-6
_MARGIN_CAP = 1.0
_DIRECT_CONVOLVE_MAX = 8193
# contours are kept at least this far from pole families while minimizing the peak
_PEAK_MARGIN = 0.1
_PEAK_TAU = np.linspace(0.0, 40.0, 161)
# search box width for half-infinite strips and grid size of the placement search
_SEARCH_REACH = 20.0
_SEARCH_NODES = 24


@dataclass(frozen=True)
class EgbmgfSpec:
    outer: GBlock
    inner1: GBlock
    inner2: GBlock
    x: float
    y: float

    def __post_init__(self):
        for name in ("x", "y"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"EGBMGF argument {name} must be positive and finite, got {v}")
            object.__setattr__(self, name, v)
        for block in (self.outer, self.inner1, self.inner2):
            if block.decay <= 0:
                raise ValueError("every EGBMGF kernel must decay along vertical lines")


def _separating_point(spec: EgbmgfSpec) -> tuple[float, float, float]:
    """Abscissae (c1, c2) maximizing the distance to the nearest pole family.

    The constraints are l1 < c1 < r1, l2 < c2 < r2 and lo < c1 + c2 < ro;
    the margin is capped at one unit so half-infinite strips stay near their
    finite edge. Returns ``(c1, c2, margin)``.
    """
    l1, r1 = spec.inner1.strip()
    l2, r2 = spec.inner2.strip()
    lo, ro = spec.outer.strip()
    # variables (c1, c2, margin); maximize margin
    rows, rhs = [], []

    def bound(coef1, coef2, limit, upper):
        if not math.isfinite(limit):
            return
        if upper:  # coef . c + margin <= limit
            rows.append([coef1, coef2, 1.0])
            rhs.append(limit)
        else:  # coef . c - margin >= limit
            rows.append([-coef1, -coef2, 1.0])
            rhs.append(-limit)

    bound(1, 0, l1, False)
    bound(1, 0, r1, True)
    bound(0, 1, l2, False)
    bound(0, 1, r2, True)
    bound(1, 1, lo, False)
    bound(1, 1, ro, True)
    res = optimize.linprog(c=[0.0, 0.0, -1.0], A_ub=np.array(rows), b_ub=np.array(rhs),
                           bounds=[(None, None), (None, None), (None, _MARGIN_CAP)],
                           method="highs")
    if res.status != 0 or res.x[2] < _MIN_MARGIN:
        raise ContourError("no pair of vertical contours separates the pole families")
    c1, c2, margin = (float(v) for v in res.x)
    return c1, c2, margin


def _line_peak(block: GBlock, c: float, log_arg: float) -> float:
    # real parameters: |kernel| is even in the imaginary part
    return float(np.max(block.log_kernel(c + 1j * _PEAK_TAU).real)) + c * log_arg


def _log_peak(spec: EgbmgfSpec, c1: float, c2: float) -> float:
    """Upper bound on the log magnitude of the integrand over both contours."""
    return (_line_peak(spec.inner1, c1, math.log(spec.x))
            + _line_peak(spec.inner2, c2, math.log(spec.y))
            + _line_peak(spec.outer, c1 + c2, 0.0))


def _box(lower: float, upper: float) -> tuple[float, float]:
    """Finite search interval for one abscissa."""
    if math.isfinite(lower) and math.isfinite(upper):
        return lower, upper
    if math.isfinite(lower):
        return lower, lower + _SEARCH_REACH
    if math.isfinite(upper):
        return upper - _SEARCH_REACH, upper
    return -_SEARCH_REACH, _SEARCH_REACH


def place_contours(spec: EgbmgfSpec) -> tuple[float, float, float]:
    """Abscissae (c1, c2) and their distance to the nearest pole family.

    Among points at least a small margin away from every pole family, the
    contours are placed where the peak of the integrand is smallest, which
    controls cancellation when the arguments are far from one: a coarse grid
    over the admissible region, then a local refinement.
    """
    _, _, margin = _separating_point(spec)
    keep = min(_PEAK_MARGIN, margin / 2)
    (l1, r1), (l2, r2), (lo, ro) = spec.inner1.strip(), spec.inner2.strip(), spec.outer.strip()

    def gaps(c):
        return np.array([c[0] - l1, r1 - c[0], c[1] - l2, r2 - c[1],
                         c[0] + c[1] - lo, ro - c[0] - c[1]])

    def objective(c):
        if np.min(gaps(c)) < keep:
            return math.inf
        return _log_peak(spec, c[0], c[1])

    b1, b2 = _box(l1, r1), _box(l2, r2)
    g1 = np.linspace(b1[0], b1[1], _SEARCH_NODES + 2)[1:-1]
    g2 = np.linspace(b2[0], b2[1], _SEARCH_NODES + 2)[1:-1]
    # grid stage, vectorized over all candidate pairs
    u, v = np.meshgrid(g1, g2, indexing="ij")
    peak1 = np.max(spec.inner1.log_kernel(g1[:, None] + 1j * _PEAK_TAU).real, axis=1) + g1 * math.log(spec.x)
    peak2 = np.max(spec.inner2.log_kernel(g2[:, None] + 1j * _PEAK_TAU).real, axis=1) + g2 * math.log(spec.y)
    total = (u + v).ravel()
    peak_o = np.max(spec.outer.log_kernel(total[:, None] + 1j * _PEAK_TAU).real, axis=1)
    scores = (peak1[:, None] + peak2[None, :]).ravel() + peak_o
    admissible = np.min(np.stack([u.ravel() - l1, r1 - u.ravel(), v.ravel() - l2, r2 - v.ravel(),
                                  total - lo, ro - total]), axis=0) >= keep
    scores = np.where(admissible & np.isfinite(scores), scores, math.inf)
    start = np.array(_separating_point(spec)[:2])
    if np.min(scores) < objective(start):
        k = int(np.argmin(scores))
        start = np.array([u.ravel()[k], v.ravel()[k]])
    best = start
    step = min(g1[1] - g1[0], g2[1] - g2[0])
    res = optimize.minimize(objective, best, method="Nelder-Mead",
                            options={"initial_simplex": [best, best + [step, 0], best + [0, step]],
                                     "xatol": 1e-3, "fatol": 1e-3, "maxiter": 200})
    if res.fun < objective(best):
        best = res.x
    c1, c2 = float(best[0]), float(best[1])
    return c1, c2, float(np.min(gaps(best)))


def _check_contours(spec: EgbmgfSpec, c1: float, c2: float) -> None:
    for (lo, hi), c in ((spec.inner1.strip(), c1), (spec.inner2.strip(), c2),
                        (spec.outer.strip(), c1 + c2)):
        if not lo < c < hi:
            raise ContourError(f"abscissa {c} outside the strip ({lo}, {hi})")


def _line_values(block: GBlock, c: float, tau: np.ndarray, log_arg: float) -> tuple[np.ndarray, float]:
    s = c + 1j * tau
    logf = block.log_kernel(s) + s * log_arg
    peak = float(np.max(logf.real))
    return np.exp(logf - peak), peak


def _trapezoid_2d(spec: EgbmgfSpec, c1: float, c2: float, half_width: float,
                  nodes_per_unit: int) -> tuple[float, float]:
    h = 1.0 / nodes_per_unit
    count = int(round(half_width * nodes_per_unit))
    k = np.arange(-count, count + 1)
    tau = h * k
    a, pa = _line_values(spec.inner1, c1, tau, math.log(spec.x))
    b, pb = _line_values(spec.inner2, c2, tau, math.log(spec.y))
    tau_sum = h * np.arange(-2 * count, 2 * count + 1)
    o, po = _line_values(spec.outer, c1 + c2, tau_sum, 0.0)
    if a.size <= _DIRECT_CONVOLVE_MAX:
        conv = np.convolve(a, b)
    else:
        conv = signal.fftconvolve(a, b)
    total = np.sum(o * conv).real
    value = h * h / (4.0 * math.pi**2) * total * math.exp(pa + pb + po)
    edge = max(abs(a[0]), abs(a[-1]), abs(b[0]), abs(b[-1]))
    return value, float(edge)


def egbmgf_detailed(spec: EgbmgfSpec, settings: ContourSettings | None = None) -> Evaluation:
    """Evaluate the EGBMGF with the trapezoidal rule, refining until stable.

    The step is halved until two successive estimates agree to
    ``settings.rel_tol``; the truncation is doubled whenever the integrand is
    not negligible at the ends of the contours.
    """
    settings = settings or ContourSettings()
    if settings.shift1 is not None and settings.shift2 is not None:
        c1, c2 = settings.shift1, settings.shift2
        _check_contours(spec, c1, c2)
    else:
        c1, c2, _ = place_contours(spec)
    half_width, nodes = settings.half_width, settings.nodes_per_unit
    prev = None
    for it in range(settings.max_refinements + 1):
        value, edge = _trapezoid_2d(spec, c1, c2, half_width, nodes)
        if edge > _EDGE_TOL:
            half_width *= 2
            prev = None
            continue
        if prev is not None and abs(value - prev) <= settings.rel_tol * abs(value):
            return Evaluation(value, abs(value - prev), "contour", refinements=it)
        prev = value
        nodes *= 2
    raise ConvergenceError(
        f"EGBMGF quadrature did not reach relative {settings.rel_tol} "
        f"after {settings.max_refinements} refinements")


def egbmgf(spec: EgbmgfSpec, settings: ContourSettings | None = None) -> float:
    """Value of the extended generalized bivariate Meijer G-function."""
    return egbmgf_detailed(spec, settings).value

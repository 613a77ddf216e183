"""Minimal SVG 1.1 line plot of a sweep: one polyline per (scenario, method)."""
from __future__ import annotations

import math
import os
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN = 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
DASHES = {"closed_form": "", "quadrature": "6,3", "monte_carlo": "2,3"}


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def write_svg(cfg, rows, path: str | os.PathLike) -> None:
    series: dict[tuple, list[tuple[float, float]]] = {}
    for row in rows:
        series.setdefault((row.scenario, row.result.method.value), []).append(
            (row.lambda_db, row.result.value))
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts if math.isfinite(y)]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys + [0.0]), max(ys + [1e-12])
    if x1 == x0:
        x1 = x0 + 1.0

    def px(x):
        return MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)

    def py(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
           f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>']
    for t in _ticks(x0, x1):
        out.append(f'<text x="{px(t):.1f}" y="{HEIGHT - MARGIN + 18}" font-size="11" '
                   f'text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{MARGIN - 6}" y="{py(t) + 4:.1f}" font-size="11" '
                   f'text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" font-size="12" text-anchor="middle">'
               f'lambda (dB)</text>')
    out.append(f'<text x="15" y="{HEIGHT / 2}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 15 {HEIGHT / 2})">{escape(cfg.metric)}</text>')
    scenarios = list(dict.fromkeys(key[0] for key in series))
    for (sc, method), pts in series.items():
        color = COLORS[scenarios.index(sc) % len(COLORS)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts if math.isfinite(y))
        dash = DASHES.get(method, "")
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} '
                   f'points="{coords}"/>')
    for i, sc in enumerate(scenarios):
        label = escape("m_D={:g} m_sD={:g} m_E={:g} m_sE={:g}".format(*sc))
        y = MARGIN + 14 * i
        out.append(f'<text x="{WIDTH - MARGIN}" y="{y}" font-size="10" text-anchor="end" '
                   f'fill="{COLORS[i % len(COLORS)]}">{label}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")

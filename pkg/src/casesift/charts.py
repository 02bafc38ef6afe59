"""Minimal static SVG charts for the analytics outputs.

Data-faithful and deliberately plain: fixed canvas, linear scales, one mark
per datum. An empty series still yields a valid SVG with axes and no marks.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

WIDTH = 640
HEIGHT = 400
MARGIN = 50

CLUSTER_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _scale(lo: float, hi: float, span: float):
    width = hi - lo
    if width == 0:
        width = 1.0
    return lambda v: (v - lo) / width * span


def _axes(title: str, x_label: str, y_label: str) -> list[str]:
    x0, y0 = MARGIN, HEIGHT - MARGIN
    x1, y1 = WIDTH - MARGIN, MARGIN
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<title>{escape(title)}</title>',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 8}" text-anchor="middle" '
        f'font-size="12">{escape(x_label)}</text>',
        f'<text x="14" y="{HEIGHT / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT / 2:.1f})">{escape(y_label)}</text>',
        f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" '
        f'font-size="14">{escape(title)}</text>',
    ]


def point_coords(xs: Sequence[float], ys: Sequence[float]) -> list[tuple[float, float]]:
    """Canvas coordinates used for marks; exposed so tests can check positions."""
    if not xs:
        return []
    sx = _scale(min(xs), max(xs), WIDTH - 2 * MARGIN)
    sy = _scale(min(ys), max(ys), HEIGHT - 2 * MARGIN)
    return [(MARGIN + sx(x), HEIGHT - MARGIN - sy(y)) for x, y in zip(xs, ys)]


def line_chart(points: Sequence[tuple[float, float]], title: str,
               x_label: str = "x", y_label: str = "y") -> str:
    parts = _axes(title, x_label, y_label)
    coords = point_coords([p[0] for p in points], [p[1] for p in points])
    if coords:
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in coords)
        parts.append(f'<polyline points="{path}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>')
        for x, y in coords:
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="#1f77b4" class="mark"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def bar_chart(items: Sequence[tuple[str, float]], title: str,
              x_label: str = "", y_label: str = "count") -> str:
    parts = _axes(title, x_label, y_label)
    if items:
        values = [v for _, v in items]
        top = max(max(values), 1)
        span = WIDTH - 2 * MARGIN
        slot = span / len(items)
        bar_w = slot * 0.8
        sy = _scale(0, top, HEIGHT - 2 * MARGIN)
        for i, (name, value) in enumerate(items):
            h = sy(value)
            x = MARGIN + i * slot + slot * 0.1
            y = HEIGHT - MARGIN - h
            parts.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{bar_w:.2f}" '
                         f'height="{h:.2f}" fill="#1f77b4" class="mark">'
                         f'<title>{escape(str(name))}: {value:g}</title></rect>')
    parts.append("</svg>")
    return "\n".join(parts)


def multi_line_chart(series: dict[str, Sequence[tuple[float, float]]], title: str,
                     x_label: str = "x", y_label: str = "y") -> str:
    parts = _axes(title, x_label, y_label)
    all_x = [p[0] for pts in series.values() for p in pts]
    all_y = [p[1] for pts in series.values() for p in pts]
    if all_x:
        sx = _scale(min(all_x), max(all_x), WIDTH - 2 * MARGIN)
        sy = _scale(min(all_y), max(all_y), HEIGHT - 2 * MARGIN)
        for idx, (name, pts) in enumerate(series.items()):
            color = CLUSTER_COLORS[idx % len(CLUSTER_COLORS)]
            coords = [(MARGIN + sx(x), HEIGHT - MARGIN - sy(y)) for x, y in pts]
            path = " ".join(f"{x:.2f},{y:.2f}" for x, y in coords)
            parts.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                         f'stroke-width="1.5"><title>{escape(name)}</title></polyline>')
    parts.append("</svg>")
    return "\n".join(parts)


def regression_chart(points: Sequence[tuple[float, float]], slope: float,
                     intercept: float, title: str,
                     x_label: str = "year", y_label: str = "cases") -> str:
    """Scatter plus the fitted line; line endpoints come from the fit itself."""
    parts = _axes(title, x_label, y_label)
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    coords = point_coords(xs, ys)
    for x, y in coords:
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="#1f77b4" class="mark"/>')
    if xs:
        lo, hi = min(xs), max(xs)
        y_lo, y_hi = slope * lo + intercept, slope * hi + intercept
        sx = _scale(lo, hi, WIDTH - 2 * MARGIN)
        all_y = ys + [y_lo, y_hi]
        sy = _scale(min(all_y), max(all_y), HEIGHT - 2 * MARGIN)
        # Re-plot the scatter with the shared y scale so line and marks align.
        parts = _axes(title, x_label, y_label)
        for x, y in zip(xs, ys):
            parts.append(f'<circle cx="{MARGIN + sx(x):.2f}" cy="{HEIGHT - MARGIN - sy(y):.2f}" '
                         f'r="3" fill="#1f77b4" class="mark"/>')
        parts.append(f'<line x1="{MARGIN + sx(lo):.2f}" y1="{HEIGHT - MARGIN - sy(y_lo):.2f}" '
                     f'x2="{MARGIN + sx(hi):.2f}" y2="{HEIGHT - MARGIN - sy(y_hi):.2f}" '
                     f'stroke="#d62728" stroke-width="2" class="fit"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def cluster_scatter(values: Sequence[float], labels: Sequence[int], title: str,
                    x_label: str = "case index", y_label: str = "word count") -> str:
    parts = _axes(title, x_label, y_label)
    coords = point_coords(list(range(len(values))), list(values))
    for (x, y), label in zip(coords, labels):
        color = CLUSTER_COLORS[label % len(CLUSTER_COLORS)]
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}" class="mark"/>')
    parts.append("</svg>")
    return "\n".join(parts)

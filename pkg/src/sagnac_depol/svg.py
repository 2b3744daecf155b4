"""Minimal hand-written SVG: scatter plots, Bloch cross-sections, bar charts."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def _f(x: float) -> str:
    return f"{x:.3f}"


class Canvas:
    def __init__(self, width: int, height: int):
        self.width, self.height = width, height
        self.items: list[str] = []

    def line(self, x1, y1, x2, y2, stroke="#000", width=1.0, dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )

    def circle(self, cx, cy, r, stroke="none", fill="none", width=1.0):
        self.items.append(
            f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" stroke="{stroke}" fill="{fill}" stroke-width="{width}"/>'
        )

    def rect(self, x, y, w, h, fill="#888"):
        self.items.append(f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" fill="{fill}"/>')

    def text(self, x, y, s, size=12, anchor="middle"):
        self.items.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}" font-family="sans-serif">{escape(s)}</text>'
        )

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *self.items, "</svg>"]) + "\n"


def scatter(
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    xlabel: str,
    ylabel: str,
    title: str = "",
    lines: Sequence[tuple[Sequence[float], Sequence[float]]] = (),
) -> str:
    """Scatter plot on the unit square [0,1]x[0,1]."""
    c = Canvas(420, 380)
    left, top, size = 60, 30, 300
    px = lambda x: left + x * size
    py = lambda y: top + (1 - y) * size
    c.rect(left, top, size, size, fill="#fafafa")
    for k in range(6):
        v = k / 5
        c.line(px(v), py(0), px(v), py(0) + 5)
        c.text(px(v), py(0) + 18, f"{v:.1f}", size=10)
        c.line(px(0) - 5, py(v), px(0), py(v))
        c.text(px(0) - 8, py(v) + 3, f"{v:.1f}", size=10, anchor="end")
    for xs, ys in lines:
        for x1, y1, x2, y2 in zip(xs, ys, xs[1:], ys[1:]):
            c.line(px(x1), py(y1), px(x2), py(y2), stroke="#999", dash="4,3")
    for k, (name, xs, ys) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        for x, y in zip(xs, ys):
            c.circle(px(x), py(y), 3.5, fill=color)
        c.circle(left + size + 12, top + 10 + 16 * k, 4, fill=color)
        c.text(left + size + 20, top + 14 + 16 * k, name, size=11, anchor="start")
    c.text(px(0.5), top + size + 36, xlabel)
    c.text(18, py(0.5), ylabel)
    if title:
        c.text(px(0.5), 18, title, size=13)
    return c.render()


def bloch_sections(points: Sequence[tuple[str, float, float, float]], radii: Sequence[float] = ()) -> str:
    """Two Bloch-sphere cross-sections (x-z and x-y) with points ``(group, rx, ry, rz)``."""
    c = Canvas(680, 360)
    scale = 130
    centres = ((170, 190, "x-z plane", "x", "z"), (510, 190, "x-y plane", "x", "y"))
    groups = sorted({g for g, *_ in points})
    for cx, cy, name, hx, vx in centres:
        c.circle(cx, cy, scale, stroke="#333")
        for r in radii:
            c.circle(cx, cy, scale * r, stroke="#aaa", width=0.8)
        c.line(cx - scale - 10, cy, cx + scale + 10, cy, stroke="#bbb")
        c.line(cx, cy - scale - 10, cx, cy + scale + 10, stroke="#bbb")
        c.text(cx + scale + 18, cy + 4, hx)
        c.text(cx, cy - scale - 14, vx)
        c.text(cx, 20, name, size=13)
        for g, rx, ry, rz in points:
            v = rz if vx == "z" else ry
            color = _COLORS[groups.index(g) % len(_COLORS)]
            c.circle(cx + scale * rx, cy - scale * v, 3.5, fill=color)
    for k, g in enumerate(groups):
        c.circle(20, 345 - 14 * (len(groups) - 1 - k), 4, fill=_COLORS[k % len(_COLORS)])
        c.text(30, 349 - 14 * (len(groups) - 1 - k), g, size=10, anchor="start")
    return c.render()


def bar_chart(labels: Sequence[str], values: Sequence[float], title: str = "") -> str:
    """Vertical bars; values may be negative."""
    c = Canvas(80 + 50 * len(labels), 320)
    top, height = 40, 220
    values = [float(v) for v in values]
    hi, lo = max(values + [0.0]), min(values + [0.0])
    span = max(hi - lo, 1e-12)
    py = lambda v: top + (hi - v) / span * height
    c.line(40, py(0), 40 + 50 * len(labels), py(0))
    for k, (lab, v) in enumerate(zip(labels, values)):
        x = 50 + 50 * k
        y0, y1 = py(0), py(v)
        c.rect(x, min(y0, y1), 30, abs(y1 - y0), fill=_COLORS[0] if v >= 0 else _COLORS[1])
        c.text(x + 15, top + height + 20, lab, size=10)
        c.text(x + 15, min(y0, y1) - 4, f"{v:.3f}", size=9)
    if title:
        c.text(c.width / 2, 20, title, size=13)
    return c.render()

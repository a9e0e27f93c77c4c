"""Minimal self-contained SVG: histogram bars under a density polyline."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 600
MARGIN = 60


def overlay(edges, heights, curve_x, curve_y, title: str = "", xlabel: str = "angle (rad)") -> str:
    edges = np.asarray(edges, dtype=float)
    heights = np.asarray(heights, dtype=float)
    curve_x = np.asarray(curve_x, dtype=float)
    curve_y = np.asarray(curve_y, dtype=float)
    x0, x1 = edges[0], edges[-1]
    top = max(float(heights.max(initial=0.0)), float(curve_y.max(initial=0.0))) * 1.08 or 1.0
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(x):
        return MARGIN + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return HEIGHT - MARGIN - y / top * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for lo, hi, h in zip(edges[:-1], edges[1:], heights):
        parts.append(
            f'<rect x="{sx(lo):.2f}" y="{sy(h):.2f}" width="{sx(hi) - sx(lo):.2f}" '
            f'height="{sy(0) - sy(h):.2f}" fill="#4a78c2" stroke="#2c4f8a" stroke-width="0.5"/>'
        )
    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(curve_x, curve_y))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#d62728" stroke-width="2"/>')
    axis = "stroke=\"black\" stroke-width=\"1\""
    parts.append(f'<line x1="{MARGIN}" y1="{sy(0):.2f}" x2="{WIDTH - MARGIN}" y2="{sy(0):.2f}" {axis}/>')
    parts.append(f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{sy(0):.2f}" {axis}/>')
    for t in np.linspace(x0, x1, 5):
        parts.append(
            f'<text x="{sx(t):.2f}" y="{HEIGHT - MARGIN + 18}" font-size="12" text-anchor="middle">{t:.3f}</text>'
        )
    for t in np.linspace(0.0, top, 5):
        parts.append(f'<text x="{MARGIN - 6}" y="{sy(t) + 4:.2f}" font-size="12" text-anchor="end">{t:.2f}</text>')
    parts.append(
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" font-size="14" text-anchor="middle">{escape(xlabel)}</text>'
    )
    if title:
        parts.append(f'<text x="{WIDTH / 2}" y="30" font-size="16" text-anchor="middle">{escape(title)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

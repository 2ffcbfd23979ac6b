"""Minimal self-contained SVG line plots (no plotting library).

Just enough for an ROC overlay: an axes box on the unit square, gridlines,
tick labels, one polyline per curve, and a text legend. Output is a plain
string and fully deterministic.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

PALETTE = ("#1f6fb2", "#c44e52", "#2e8b57", "#8c564b", "#7b5ea7", "#b8860b")
DASHES = ("", "7,4", "2,3", "8,3,2,3")

_W, _H = 640, 520
_ML, _MR, _MT, _MB = 64, 16, 28, 48


def _x(pfa: float) -> float:
    return _ML + pfa * (_W - _ML - _MR)


def _y(pd: float) -> float:
    return _H - _MB - pd * (_H - _MT - _MB)


def _downsample(a: np.ndarray, limit: int = 512) -> np.ndarray:
    if a.size <= limit:
        return a
    idx = np.linspace(0, a.size - 1, limit).round().astype(int)
    return a[idx]


def roc_overlay_svg(
    curves: Sequence[tuple[str, int, int, np.ndarray, np.ndarray]],
    title: str = "ROC",
) -> str:
    """Render curves as one SVG overlay.

    Each entry is ``(label, color_index, dash_index, pfa, pd)``; pfa/pd are
    arrays over [0, 1] (any order; they are sorted by pfa for drawing).
    """
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="18" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for k in range(6):
        v = k / 5.0
        gx, gy = _x(v), _y(v)
        parts.append(
            f'<line x1="{gx:.1f}" y1="{_y(0):.1f}" x2="{gx:.1f}" y2="{_y(1):.1f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<line x1="{_x(0):.1f}" y1="{gy:.1f}" x2="{_x(1):.1f}" y2="{gy:.1f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{gx:.1f}" y="{_y(0) + 16:.1f}" text-anchor="middle">{v:.1f}</text>'
        )
        parts.append(
            f'<text x="{_x(0) - 6:.1f}" y="{gy + 4:.1f}" text-anchor="end">{v:.1f}</text>'
        )
    parts.append(
        f'<rect x="{_x(0):.1f}" y="{_y(1):.1f}" width="{_x(1) - _x(0):.1f}" '
        f'height="{_y(0) - _y(1):.1f}" fill="none" stroke="#333333"/>'
    )
    parts.append(
        f'<text x="{_x(0.5):.1f}" y="{_H - 10}" text-anchor="middle">'
        "probability of false alarm</text>"
    )
    parts.append(
        f'<text x="16" y="{_y(0.5):.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_y(0.5):.1f})">probability of detection</text>'
    )
    for label, color_index, dash_index, pfa, pd in curves:
        order = np.argsort(np.asarray(pfa), kind="stable")
        px = _downsample(np.asarray(pfa)[order])
        py = _downsample(np.asarray(pd)[order])
        pts = " ".join(f"{_x(x):.2f},{_y(y):.2f}" for x, y in zip(px, py))
        color = PALETTE[color_index % len(PALETTE)]
        dash = DASHES[dash_index % len(DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"{dash_attr}/>'
        )
    legend_y = _y(1) + 14
    for i, (label, color_index, dash_index, _, _) in enumerate(curves):
        color = PALETTE[color_index % len(PALETTE)]
        dash = DASHES[dash_index % len(DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        ly = legend_y + 16 * i
        parts.append(
            f'<line x1="{_x(1) - 190:.1f}" y1="{ly}" x2="{_x(1) - 162:.1f}" y2="{ly}" '
            f'stroke="{color}" stroke-width="1.5"{dash_attr}/>'
        )
        parts.append(f'<text x="{_x(1) - 156:.1f}" y="{ly + 4}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

"""Minimal self-contained SVG rendering of parking trajectories.

One drawing shows (x, y) paths with periodic heading ticks, the target pose
marker at the origin (arrow along the target heading), and labelled axes.
No external assets, scripts, or fonts beyond generic sans-serif.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["SvgPath", "render_paths"]

_COLORS = ("#d62728", "#1f77b4", "#17becf", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class SvgPath:
    """One trajectory to draw: Cartesian samples (N, 3) and a label."""

    cartesian: np.ndarray
    label: str = ""
    color: str | None = None


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s for s in (mag, 2 * mag, 5 * mag, 10 * mag) if s >= raw)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12:
        out.append(round(t, 12))
        t += step
    return out


def render_paths(
    paths: list[SvgPath],
    target: tuple[float, float, float] = (0.0, 0.0, 0.0),
    size: int = 640,
    heading_ticks_every: int = 0,
) -> str:
    """Render trajectories to an SVG string.

    ``heading_ticks_every``: sample stride between short heading dashes;
    0 picks roughly 25 ticks per path.
    """
    xs = [target[0]]
    ys = [target[1]]
    for p in paths:
        arr = np.asarray(p.cartesian, dtype=float).reshape(-1, 3)
        xs.extend((float(arr[:, 0].min()), float(arr[:, 0].max())))
        ys.extend((float(arr[:, 1].min()), float(arr[:, 1].max())))
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    span = max(x_hi - x_lo, y_hi - y_lo, 1e-6)
    pad = 0.08 * span
    x_lo, x_hi = x_lo - pad, x_hi + pad
    y_lo, y_hi = y_lo - pad, y_hi + pad
    span_x, span_y = x_hi - x_lo, y_hi - y_lo
    scale = (size - 70) / max(span_x, span_y)
    w = int(span_x * scale) + 70
    h = int(span_y * scale) + 70

    def sx(x: float) -> float:
        return 50.0 + (x - x_lo) * scale

    def sy(y: float) -> float:
        # SVG y grows downward; world y grows upward.
        return (h - 40.0) - (y - y_lo) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]
    # Axes with tick labels.
    ax_y = sy(y_lo)
    ax_x = sx(x_lo)
    out.append(
        f'<line x1="{sx(x_lo):.1f}" y1="{ax_y:.1f}" x2="{sx(x_hi):.1f}" y2="{ax_y:.1f}" '
        'stroke="#444" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{ax_x:.1f}" y1="{sy(y_lo):.1f}" x2="{ax_x:.1f}" y2="{sy(y_hi):.1f}" '
        'stroke="#444" stroke-width="1"/>'
    )
    for t in _ticks(x_lo, x_hi):
        out.append(
            f'<line x1="{sx(t):.1f}" y1="{ax_y:.1f}" x2="{sx(t):.1f}" y2="{ax_y + 4:.1f}" '
            'stroke="#444" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{sx(t):.1f}" y="{ax_y + 16:.1f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle" fill="#444">{t:g}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        out.append(
            f'<line x1="{ax_x - 4:.1f}" y1="{sy(t):.1f}" x2="{ax_x:.1f}" y2="{sy(t):.1f}" '
            'stroke="#444" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{ax_x - 7:.1f}" y="{sy(t) + 4:.1f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end" fill="#444">{t:g}</text>'
        )
    out.append(
        f'<text x="{sx(x_hi):.1f}" y="{ax_y + 32:.1f}" font-family="sans-serif" '
        'font-size="12" text-anchor="end" fill="#222">x [m]</text>'
    )
    out.append(
        f'<text x="{ax_x + 6:.1f}" y="{sy(y_hi) - 8:.1f}" font-family="sans-serif" '
        'font-size="12" fill="#222">y [m]</text>'
    )

    # Trajectories.
    for i, p in enumerate(paths):
        arr = np.asarray(p.cartesian, dtype=float).reshape(-1, 3)
        color = p.color or _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(arr[:, 0], arr[:, 1]))
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        stride = heading_ticks_every or max(1, len(arr) // 25)
        tick_len = 0.025 * span
        for j in range(0, len(arr), stride):
            x, y, th = arr[j]
            out.append(
                f'<line x1="{sx(x):.2f}" y1="{sy(y):.2f}" '
                f'x2="{sx(x + tick_len * math.cos(th)):.2f}" '
                f'y2="{sy(y + tick_len * math.sin(th)):.2f}" '
                f'stroke="{color}" stroke-width="0.8" opacity="0.7"/>'
            )
        # Start marker.
        out.append(
            f'<circle cx="{sx(arr[0, 0]):.2f}" cy="{sy(arr[0, 1]):.2f}" r="3" '
            f'fill="{color}"/>'
        )

    # Target pose: filled arrow at (x*, y*) along theta*.
    tx, ty, tth = target
    a_len = 0.06 * span
    a_wid = 0.022 * span
    tip = (tx + a_len * math.cos(tth), ty + a_len * math.sin(tth))
    left = (tx - a_wid * math.sin(tth), ty + a_wid * math.cos(tth))
    right = (tx + a_wid * math.sin(tth), ty - a_wid * math.cos(tth))
    out.append(
        '<polygon points="'
        f'{sx(tip[0]):.2f},{sy(tip[1]):.2f} {sx(left[0]):.2f},{sy(left[1]):.2f} '
        f'{sx(right[0]):.2f},{sy(right[1]):.2f}" fill="black"/>'
    )
    out.append(f'<circle cx="{sx(tx):.2f}" cy="{sy(ty):.2f}" r="2.5" fill="black"/>')

    # Legend for labelled paths (one entry per distinct label).
    seen: dict[str, str] = {}
    for i, p in enumerate(paths):
        if p.label and p.label not in seen:
            seen[p.label] = p.color or _COLORS[i % len(_COLORS)]
    for row, (label, color) in enumerate(seen.items()):
        ly = 20 + 16 * row
        out.append(
            f'<line x1="{w - 130}" y1="{ly}" x2="{w - 110}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{w - 104}" y="{ly + 4}" font-family="sans-serif" font-size="12" '
            f'fill="#222">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out)

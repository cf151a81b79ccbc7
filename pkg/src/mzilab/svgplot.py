"""Dependency-free SVG line charts for scan datasets."""

from __future__ import annotations

import numpy as np

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
    "#bcbd22",
    "#e377c2",
)


def _fmt(v: float) -> str:
    return format(v, ".2f")


def render_line_chart(
    x,
    series: dict,
    x_label: str,
    y_label: str = "value",
    width: int = 840,
    height: int = 520,
) -> str:
    """One polyline per series over a shared axis frame, legend at right."""
    x = np.asarray(x, dtype=float)
    if x.size < 2 or not series:
        raise ValueError("need at least two points and one series")
    ml, mr, mt, mb = 72.0, 180.0, 24.0, 56.0
    pw, ph = width - ml - mr, height - mt - mb

    xmin, xmax = float(x.min()), float(x.max())
    if xmax == xmin:
        xmax = xmin + 1.0
    all_y = np.concatenate([np.asarray(col, dtype=float) for col in series.values()])
    ymin, ymax = float(all_y.min()), float(all_y.max())
    pad = 0.05 * (ymax - ymin)
    if pad == 0.0:
        pad = 0.5
    ymin -= pad
    ymax += pad

    def sx(v: float) -> float:
        return ml + (v - xmin) / (xmax - xmin) * pw

    def sy(v: float) -> float:
        return mt + (ymax - v) / (ymax - ymin) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{_fmt(ml)}" y="{_fmt(mt)}" width="{_fmt(pw)}" height="{_fmt(ph)}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]

    for v in np.linspace(xmin, xmax, 5):
        px = sx(v)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(mt + ph)}" x2="{_fmt(px)}" '
            f'y2="{_fmt(mt + ph + 5)}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{_fmt(mt + ph + 20)}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif">{v:.4g}</text>'
        )
    for v in np.linspace(ymin, ymax, 5):
        py = sy(v)
        parts.append(
            f'<line x1="{_fmt(ml - 5)}" y1="{_fmt(py)}" x2="{_fmt(ml)}" '
            f'y2="{_fmt(py)}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{_fmt(ml - 9)}" y="{_fmt(py + 4)}" font-size="12" '
            f'text-anchor="end" font-family="sans-serif">{v:.4g}</text>'
        )

    for i, (name, col) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        col = np.asarray(col, dtype=float)
        points = " ".join(f"{_fmt(sx(xv))},{_fmt(sy(yv))}" for xv, yv in zip(x, col))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )
        ly = mt + 16 + 20 * i
        lx = ml + pw + 14
        parts.append(
            f'<line x1="{_fmt(lx)}" y1="{_fmt(ly - 4)}" x2="{_fmt(lx + 22)}" '
            f'y2="{_fmt(ly - 4)}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_fmt(lx + 28)}" y="{_fmt(ly)}" font-size="12" '
            f'font-family="sans-serif">{name}</text>'
        )

    parts.append(
        f'<text x="{_fmt(ml + pw / 2)}" y="{_fmt(height - 12)}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif">{x_label}</text>'
    )
    parts.append(
        f'<text x="16" y="{_fmt(mt + ph / 2)}" font-size="13" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 16 {_fmt(mt + ph / 2)})">'
        f"{y_label}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

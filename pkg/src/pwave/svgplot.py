"""Minimal SVG line charts written by hand."""

from __future__ import annotations

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _panel(series, x0, y0, w, h, title, ylabel):
    xs = np.concatenate([s[0] for s in series])
    ys = np.concatenate([s[1] for s in series])
    ys = ys[np.isfinite(ys)]
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = (float(ys.min()), float(ys.max())) if ys.size else (0.0, 1.0)
    if ymax - ymin < 1e-300:
        ymin, ymax = ymin - 1.0, ymax + 1.0
    sx = lambda v: x0 + (v - xmin) / (xmax - xmin) * w
    sy = lambda v: y0 + h - (v - ymin) / (ymax - ymin) * h
    parts = [
        f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="#888"/>',
        f'<text x="{x0 + w / 2}" y="{y0 - 8}" text-anchor="middle" font-size="13">{title}</text>',
        f'<text x="{x0 - 6}" y="{y0 + 10}" text-anchor="end" font-size="10">{ymax:.3g}</text>',
        f'<text x="{x0 - 6}" y="{y0 + h}" text-anchor="end" font-size="10">{ymin:.3g}</text>',
        f'<text x="{x0}" y="{y0 + h + 14}" font-size="10">{xmin:.3g}</text>',
        f'<text x="{x0 + w}" y="{y0 + h + 14}" text-anchor="end" font-size="10">{xmax:.3g}</text>',
        f'<text x="{x0 - 40}" y="{y0 + h / 2}" font-size="10" transform="rotate(-90 {x0 - 40} {y0 + h / 2})">{ylabel}</text>',
    ]
    for i, (x, y, label) in enumerate(series):
        ok = np.isfinite(y)
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x[ok], y[ok]))
        col = COLORS[i % len(COLORS)]
        parts.append(f'<polyline fill="none" stroke="{col}" stroke-width="1.2" points="{pts}"/>')
        parts.append(
            f'<text x="{x0 + w - 4}" y="{y0 + 14 + 13 * i}" text-anchor="end" font-size="11" fill="{col}">{label}</text>'
        )
    return parts


def write_chart(path, panels, width=720, panel_height=240):
    """``panels`` is a list of ``(title, ylabel, [(x, y, label), ...])``."""
    top, gap, left = 30, 50, 70
    height = top + len(panels) * (panel_height + gap)
    body = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif">']
    for k, (title, ylabel, series) in enumerate(panels):
        series = [(np.asarray(x, float), np.asarray(y, float), lab) for x, y, lab in series]
        body += _panel(series, left, top + k * (panel_height + gap), width - left - 20, panel_height, title, ylabel)
    body.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(body) + "\n")


def thin(x, y, max_points=1500):
    step = max(1, len(x) // max_points)
    return np.asarray(x)[::step], np.asarray(y)[::step]

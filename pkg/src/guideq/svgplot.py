"""Tiny deterministic SVG line-plot writer.

Just enough plotting for CLI artifacts: multiple labeled series on a
shared axis pair, 1-2-5 tick placement, optional log y.  NaN samples
split a series into separate polylines, which is how the rest of the
package marks forbidden or excluded regions.  Output depends only on the
inputs, so files can be hashed into run manifests.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

# okabe-ito palette, readable for most color vision types
PALETTE = ("#0072b2", "#d55e00", "#009e73", "#cc79a7", "#56b4e9", "#e69f00")

_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 16, 28, 44


def _nice_ticks(lo: float, hi: float, target: int = 6):
    """Round tick positions covering [lo, hi], classic 1-2-5 ladder."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError("cannot place ticks on a non-finite range")
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    """Short stable tick label."""
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return f"{v:.6g}"


def write_line_plot(
    path,
    x,
    series,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    log_y: bool = False,
    width: int = 720,
    height: int = 440,
) -> None:
    """Write an SVG plot of one or more series against a shared x array.

    series: sequence of (label, values) pairs.  Values may contain NaN to
    break the line.  With log_y=True non-positive values break the line
    the same way.
    """
    x = np.asarray(x, dtype=float)
    named = [(str(label), np.asarray(vals, dtype=float)) for label, vals in series]
    if not named:
        raise DomainError("no series to plot")
    for label, vals in named:
        if vals.shape != x.shape:
            raise DomainError(f"series {label!r} length {vals.size} does not match x ({x.size})")

    ys = []
    for _, vals in named:
        v = vals[np.isfinite(vals)]
        if log_y:
            v = v[v > 0]
        ys.append(v)
    stacked = np.concatenate([v for v in ys if v.size]) if any(v.size for v in ys) else None
    if stacked is None or stacked.size == 0:
        raise DomainError("no finite data to plot")

    if log_y:
        y_lo, y_hi = math.log10(stacked.min()), math.log10(stacked.max())
        if y_hi - y_lo < 1e-9:
            y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
        y_ticks = list(range(math.ceil(y_lo), math.floor(y_hi) + 1)) or [round(y_lo)]
        y_tick_pos = [float(t) for t in y_ticks]
        y_tick_lab = [f"1e{t}" for t in y_ticks]
    else:
        y_lo, y_hi = float(stacked.min()), float(stacked.max())
        if y_hi - y_lo < 1e-12 * max(abs(y_hi), 1.0):
            pad = max(abs(y_hi), 1.0) * 0.5
            y_lo, y_hi = y_lo - pad, y_hi + pad
        span = y_hi - y_lo
        y_lo, y_hi = y_lo - 0.05 * span, y_hi + 0.05 * span
        y_tick_pos = _nice_ticks(y_lo, y_hi)
        y_tick_lab = [_fmt(t) for t in y_tick_pos]

    x_lo, x_hi = float(np.min(x)), float(np.max(x))
    if x_hi - x_lo < 1e-12:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    x_ticks = _nice_ticks(x_lo, x_hi)

    plot_w = width - _MARGIN_L - _MARGIN_R
    plot_h = height - _MARGIN_T - _MARGIN_B

    def sx(v):
        return _MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v):
        if log_y:
            v = math.log10(v)
        return _MARGIN_T + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">'
    )
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    if title:
        out.append(
            f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{_esc(title)}</text>'
        )

    for t in x_ticks:
        px = sx(t)
        out.append(
            f'<line x1="{px:.2f}" y1="{_MARGIN_T}" x2="{px:.2f}" y2="{_MARGIN_T + plot_h}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{px:.2f}" y="{_MARGIN_T + plot_h + 16}" text-anchor="middle">{_esc(_fmt(t))}</text>'
        )
    for t, lab in zip(y_tick_pos, y_tick_lab):
        py = _MARGIN_T + plot_h - (t - y_lo) / (y_hi - y_lo) * plot_h
        out.append(
            f'<line x1="{_MARGIN_L}" y1="{py:.2f}" x2="{_MARGIN_L + plot_w}" y2="{py:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_MARGIN_L - 6}" y="{py + 4:.2f}" text-anchor="end">{_esc(lab)}</text>'
        )
    out.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333"/>'
    )
    if xlabel:
        out.append(
            f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{height - 8}" text-anchor="middle">{_esc(xlabel)}</text>'
        )
    if ylabel:
        cy = _MARGIN_T + plot_h / 2
        out.append(
            f'<text x="14" y="{cy:.1f}" text-anchor="middle" transform="rotate(-90 14 {cy:.1f})">{_esc(ylabel)}</text>'
        )

    for i, (label, vals) in enumerate(named):
        color = PALETTE[i % len(PALETTE)]
        ok = np.isfinite(vals)
        if log_y:
            ok &= vals > 0
        # split on gaps so excluded regions stay visually excluded
        start = None
        runs = []
        for j, good in enumerate(ok):
            if good and start is None:
                start = j
            elif not good and start is not None:
                runs.append((start, j))
                start = None
        if start is not None:
            runs.append((start, len(ok)))
        for a, b in runs:
            if b - a == 1:
                out.append(
                    f'<circle cx="{sx(x[a]):.2f}" cy="{sy(vals[a]):.2f}" r="2" fill="{color}"/>'
                )
                continue
            pts = " ".join(f"{sx(xi):.2f},{sy(vi):.2f}" for xi, vi in zip(x[a:b], vals[a:b]))
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        # legend swatch
        ly = _MARGIN_T + 14 + 16 * i
        out.append(
            f'<line x1="{_MARGIN_L + plot_w - 130}" y1="{ly - 4}" x2="{_MARGIN_L + plot_w - 110}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{_MARGIN_L + plot_w - 104}" y="{ly}">{_esc(label)}</text>')

    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out))
        fh.write("\n")


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")

"""Dependency-free SVG plots for run artifacts.

Line plots (several named series over a shared x axis) and bar charts with
optional error whiskers.  The numbers behind every figure are embedded as
an XML comment so artifacts stay self-describing.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .util import atomic_write_text

_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
_W, _H = 640, 400
_ML, _MR, _MT, _MB = 62, 16, 34, 46


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _axis_bounds(lo: float, hi: float) -> tuple[float, float]:
    if hi <= lo:
        pad = max(abs(lo), 1.0) * 0.05
        return lo - pad, lo + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str):
        self.parts: list[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
            f'<rect width="{_W}" height="{_H}" fill="white"/>',
            f'<text x="{_W / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
            f'<text x="{(_ML + _W - _MR) / 2}" y="{_H - 10}" text-anchor="middle">{xlabel}</text>',
            f'<text x="16" y="{(_MT + _H - _MB) / 2}" text-anchor="middle" '
            f'transform="rotate(-90 16 {(_MT + _H - _MB) / 2})">{ylabel}</text>',
        ]

    def frame(self, x0: float, x1: float, y0: float, y1: float) -> None:
        left, right = _ML, _W - _MR
        top, bottom = _MT, _H - _MB
        self.parts.append(
            f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
            'fill="none" stroke="#444"/>'
        )
        for frac in (0.0, 0.5, 1.0):
            xv = x0 + frac * (x1 - x0)
            yv = y0 + frac * (y1 - y0)
            px = left + frac * (right - left)
            py = bottom - frac * (bottom - top)
            self.parts.append(
                f'<text x="{px:.1f}" y="{bottom + 16}" text-anchor="middle">{_fmt(xv)}</text>'
            )
            self.parts.append(
                f'<text x="{left - 6}" y="{py + 4:.1f}" text-anchor="end">{_fmt(yv)}</text>'
            )

    def finish(self) -> str:
        self.parts.append("</svg>")
        return "\n".join(self.parts)


def _project(xs, ys, x0, x1, y0, y1) -> str:
    left, right = _ML, _W - _MR
    top, bottom = _MT, _H - _MB
    pts = []
    for x, y in zip(xs, ys):
        px = left + (x - x0) / (x1 - x0) * (right - left)
        py = bottom - (y - y0) / (y1 - y0) * (bottom - top)
        pts.append(f"{px:.2f},{py:.2f}")
    return " ".join(pts)


def line_plot(
    path: str | Path,
    x: Sequence[float],
    series: dict[str, Sequence[float]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> None:
    """Plot named series against a shared x vector."""
    if not series:
        raise ValueError("nothing to plot")
    xs = [float(v) for v in x]
    for name, ys in series.items():
        if len(ys) != len(xs):
            raise ValueError(f"series {name!r} has {len(ys)} points for {len(xs)} x values")
    all_y = [float(v) for ys in series.values() for v in ys]
    x0, x1 = _axis_bounds(min(xs), max(xs))
    y0, y1 = _axis_bounds(min(all_y), max(all_y))

    canvas = _Canvas(title, xlabel, ylabel)
    canvas.frame(x0, x1, y0, y1)
    for i, (name, ys) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        canvas.parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{_project(xs, [float(v) for v in ys], x0, x1, y0, y1)}"/>'
        )
        canvas.parts.append(
            f'<text x="{_W - _MR - 6}" y="{_MT + 16 + 16 * i}" text-anchor="end" '
            f'fill="{color}">{name}</text>'
        )
    data = "; ".join(
        f"{name}: " + ",".join(_fmt(float(v)) for v in ys) for name, ys in series.items()
    )
    canvas.parts.append(f"<!-- x: {','.join(_fmt(v) for v in xs)} -->")
    canvas.parts.append(f"<!-- data: {data} -->")
    atomic_write_text(Path(path), canvas.finish() + "\n")


def bar_chart(
    path: str | Path,
    labels: Sequence[str],
    values: Sequence[float],
    errors: Sequence[float] | None = None,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> None:
    """Bar chart with optional symmetric error whiskers."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("nothing to plot")
    errs = [float(e) for e in errors] if errors is not None else [0.0] * len(vals)
    if len(errs) != len(vals) or len(labels) != len(vals):
        raise ValueError("labels, values and errors must have the same length")
    y0, y1 = _axis_bounds(min(0.0, min(v - e for v, e in zip(vals, errs))),
                          max(v + e for v, e in zip(vals, errs)))

    canvas = _Canvas(title, xlabel, ylabel)
    canvas.frame(0, len(vals), y0, y1)
    left, right = _ML, _W - _MR
    top, bottom = _MT, _H - _MB
    slot = (right - left) / len(vals)

    def py(v: float) -> float:
        return bottom - (v - y0) / (y1 - y0) * (bottom - top)

    for i, (label, v, e) in enumerate(zip(labels, vals, errs)):
        bx = left + i * slot + slot * 0.15
        bw = slot * 0.7
        base = py(max(0.0, y0))
        topy = py(v)
        canvas.parts.append(
            f'<rect x="{bx:.2f}" y="{min(topy, base):.2f}" width="{bw:.2f}" '
            f'height="{abs(base - topy):.2f}" fill="{_PALETTE[0]}" fill-opacity="0.8"/>'
        )
        if e > 0:
            cx = bx + bw / 2
            canvas.parts.append(
                f'<line x1="{cx:.2f}" y1="{py(v - e):.2f}" x2="{cx:.2f}" y2="{py(v + e):.2f}" '
                'stroke="#222"/>'
            )
            for yy in (v - e, v + e):
                canvas.parts.append(
                    f'<line x1="{cx - 4:.2f}" y1="{py(yy):.2f}" x2="{cx + 4:.2f}" '
                    f'y2="{py(yy):.2f}" stroke="#222"/>'
                )
        canvas.parts.append(
            f'<text x="{bx + bw / 2:.2f}" y="{bottom + 16}" text-anchor="middle">{label}</text>'
        )
    rows = "; ".join(
        f"{l}: {_fmt(v)}+-{_fmt(e)}" for l, v, e in zip(labels, vals, errs)
    )
    canvas.parts.append(f"<!-- data: {rows} -->")
    atomic_write_text(Path(path), canvas.finish() + "\n")

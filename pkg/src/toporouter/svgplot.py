"""Minimal self-contained SVG plotting: line plots, heatmaps, bar charts.

Just enough to visualize the emitted tables without pulling in a plotting
stack.  Output is plain SVG 1.1 markup; every function returns the document
as a string and does no I/O.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

__all__ = ["line_plot", "heatmap", "bar_chart"]

_FONT = "font-family='Helvetica,Arial,sans-serif'"
_SERIES_COLORS = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
    "#4b0082", "#b8860b", "#2f4f4f",
]
# Dark-blue to yellow ramp for heatmap cells.
_RAMP = [
    (0.267, 0.005, 0.329),
    (0.254, 0.265, 0.530),
    (0.164, 0.471, 0.558),
    (0.135, 0.659, 0.518),
    (0.478, 0.821, 0.318),
    (0.993, 0.906, 0.144),
]


def _esc(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return []
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(target, 2)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _ramp_color(t: float) -> str:
    t = min(1.0, max(0.0, t))
    pos = t * (len(_RAMP) - 1)
    i = min(int(pos), len(_RAMP) - 2)
    frac = pos - i
    rgb = [
        _RAMP[i][c] + frac * (_RAMP[i + 1][c] - _RAMP[i][c]) for c in range(3)
    ]
    return "#" + "".join(f"{int(round(255 * v)):02x}" for v in rgb)


class _Frame:
    """Plot area with margins, axis mapping, and the usual chrome."""

    def __init__(self, width, height, title, xlabel, ylabel, right_pad=20):
        self.width = width
        self.height = height
        self.left, self.right = 74, width - right_pad
        self.top, self.bottom = 42, height - 52
        self.parts: list[str] = [
            f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' "
            f"height='{height}' viewBox='0 0 {width} {height}' version='1.1'>",
            f"<rect x='0' y='0' width='{width}' height='{height}' fill='white'/>",
        ]
        if title:
            self.parts.append(
                f"<text x='{width / 2:.1f}' y='24' {_FONT} font-size='15' "
                f"text-anchor='middle'>{_esc(title)}</text>"
            )
        if xlabel:
            self.parts.append(
                f"<text x='{(self.left + self.right) / 2:.1f}' y='{height - 12}' "
                f"{_FONT} font-size='13' text-anchor='middle'>{_esc(xlabel)}</text>"
            )
        if ylabel:
            x, y = 20, (self.top + self.bottom) / 2
            self.parts.append(
                f"<text x='{x}' y='{y:.1f}' {_FONT} font-size='13' text-anchor='middle' "
                f"transform='rotate(-90 {x} {y:.1f})'>{_esc(ylabel)}</text>"
            )

    def set_limits(self, x0, x1, y0, y1):
        if x1 <= x0:
            x0, x1 = x0 - 0.5, x0 + 0.5
        if y1 <= y0:
            pad = max(abs(y0) * 0.05, 0.5)
            y0, y1 = y0 - pad, y1 + pad
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1

    def px(self, x: float) -> float:
        return self.left + (x - self.x0) / (self.x1 - self.x0) * (self.right - self.left)

    def py(self, y: float) -> float:
        return self.bottom - (y - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)

    def draw_axes(self, x_ticks=None, y_ticks=None, x_tick_labels=None):
        xt = _nice_ticks(self.x0, self.x1) if x_ticks is None else list(x_ticks)
        yt = _nice_ticks(self.y0, self.y1) if y_ticks is None else list(y_ticks)
        for i, t in enumerate(xt):
            x = self.px(t)
            label = x_tick_labels[i] if x_tick_labels else _fmt(t)
            self.parts.append(
                f"<line x1='{x:.1f}' y1='{self.top}' x2='{x:.1f}' y2='{self.bottom}' "
                "stroke='#e0e0e0' stroke-width='1'/>"
            )
            self.parts.append(
                f"<text x='{x:.1f}' y='{self.bottom + 18}' {_FONT} font-size='11' "
                f"text-anchor='middle'>{_esc(label)}</text>"
            )
        for t in yt:
            y = self.py(t)
            self.parts.append(
                f"<line x1='{self.left}' y1='{y:.1f}' x2='{self.right}' y2='{y:.1f}' "
                "stroke='#e0e0e0' stroke-width='1'/>"
            )
            self.parts.append(
                f"<text x='{self.left - 6}' y='{y + 4:.1f}' {_FONT} font-size='11' "
                f"text-anchor='end'>{_esc(_fmt(t))}</text>"
            )
        self.parts.append(
            f"<rect x='{self.left}' y='{self.top}' width='{self.right - self.left}' "
            f"height='{self.bottom - self.top}' fill='none' stroke='black' stroke-width='1'/>"
        )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"])


def line_plot(
    series: Sequence[tuple],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 720,
    height: int = 460,
    legend: bool = True,
) -> str:
    """series: iterable of (x values, y values, label). nan breaks segments."""
    finite = [
        (x, y)
        for xs, ys, _ in series
        for x, y in zip(xs, ys)
        if math.isfinite(x) and math.isfinite(y)
    ]
    if not finite:
        raise ValueError("no finite data to plot")
    xs_all = [p[0] for p in finite]
    ys_all = [p[1] for p in finite]
    frame = _Frame(width, height, title, xlabel, ylabel)
    yspan = max(ys_all) - min(ys_all)
    pad = 0.05 * yspan if yspan > 0 else 0.5
    frame.set_limits(min(xs_all), max(xs_all), min(ys_all) - pad, max(ys_all) + pad)
    frame.draw_axes()
    for i, (xs, ys, _) in enumerate(series):
        color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
        segment: list[str] = []
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y):
                segment.append(f"{frame.px(x):.2f},{frame.py(y):.2f}")
            elif segment:
                frame.parts.append(
                    f"<polyline points='{' '.join(segment)}' fill='none' "
                    f"stroke='{color}' stroke-width='1.5'/>"
                )
                segment = []
        if segment:
            if len(segment) == 1:
                cx, cy = segment[0].split(",")
                frame.parts.append(f"<circle cx='{cx}' cy='{cy}' r='2.5' fill='{color}'/>")
            else:
                frame.parts.append(
                    f"<polyline points='{' '.join(segment)}' fill='none' "
                    f"stroke='{color}' stroke-width='1.5'/>"
                )
    if legend:
        labeled = [(i, s[2]) for i, s in enumerate(series) if s[2]]
        for slot, (i, label) in enumerate(labeled[:12]):
            color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
            y = frame.top + 14 + 16 * slot
            x = frame.right - 130
            frame.parts.append(
                f"<line x1='{x}' y1='{y - 4}' x2='{x + 22}' y2='{y - 4}' "
                f"stroke='{color}' stroke-width='2'/>"
            )
            frame.parts.append(
                f"<text x='{x + 28}' y='{y}' {_FONT} font-size='11'>{_esc(label)}</text>"
            )
    return frame.render()


def heatmap(
    x_values: Sequence[float],
    y_values: Sequence[float],
    z: Sequence[Sequence[float]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 760,
    height: int = 480,
    colorbar_label: str = "",
) -> str:
    """Cell grid colored by z[row][col], rows paired with y_values.

    Values are placed categorically (one cell per grid entry), which is the
    right reading for the coarse parameter grids the sweeps produce.
    """
    nx, ny = len(x_values), len(y_values)
    if nx == 0 or ny == 0 or len(z) != ny or any(len(row) != nx for row in z):
        raise ValueError("z must have shape (len(y_values), len(x_values))")
    flat = [v for row in z for v in row if math.isfinite(v)]
    if not flat:
        raise ValueError("no finite data to plot")
    zmin, zmax = min(flat), max(flat)
    zspan = zmax - zmin if zmax > zmin else 1.0
    frame = _Frame(width, height, title, xlabel, ylabel, right_pad=86)
    frame.set_limits(0, nx, 0, ny)
    cell_w = (frame.right - frame.left) / nx
    cell_h = (frame.bottom - frame.top) / ny
    for iy in range(ny):
        for ix in range(nx):
            v = z[iy][ix]
            color = _ramp_color((v - zmin) / zspan) if math.isfinite(v) else "#bbbbbb"
            frame.parts.append(
                f"<rect x='{frame.px(ix):.2f}' y='{frame.py(iy + 1):.2f}' "
                f"width='{cell_w:.2f}' height='{cell_h:.2f}' fill='{color}'/>"
            )
    x_labels = [_fmt(v) for v in x_values]
    y_labels = [_fmt(v) for v in y_values]
    frame.draw_axes(
        x_ticks=[i + 0.5 for i in range(nx)],
        y_ticks=[],
        x_tick_labels=x_labels,
    )
    for iy, label in enumerate(y_labels):
        frame.parts.append(
            f"<text x='{frame.left - 6}' y='{frame.py(iy + 0.5) + 4:.1f}' {_FONT} "
            f"font-size='11' text-anchor='end'>{_esc(label)}</text>"
        )
    bar_x, bar_w = width - 64, 16
    steps = 40
    seg_h = (frame.bottom - frame.top) / steps
    for s in range(steps):
        frac = (s + 0.5) / steps
        y = frame.bottom - (s + 1) * seg_h
        frame.parts.append(
            f"<rect x='{bar_x}' y='{y:.2f}' width='{bar_w}' height='{seg_h + 0.5:.2f}' "
            f"fill='{_ramp_color(frac)}'/>"
        )
    frame.parts.append(
        f"<rect x='{bar_x}' y='{frame.top}' width='{bar_w}' "
        f"height='{frame.bottom - frame.top}' fill='none' stroke='black'/>"
    )
    for frac, val in ((0.0, zmin), (0.5, (zmin + zmax) / 2), (1.0, zmax)):
        y = frame.bottom - frac * (frame.bottom - frame.top)
        frame.parts.append(
            f"<text x='{bar_x + bar_w + 4}' y='{y + 4:.1f}' {_FONT} font-size='10'>"
            f"{_esc(_fmt(val))}</text>"
        )
    if colorbar_label:
        x, y = bar_x + bar_w / 2, frame.top - 8
        frame.parts.append(
            f"<text x='{x}' y='{y}' {_FONT} font-size='11' text-anchor='middle'>"
            f"{_esc(colorbar_label)}</text>"
        )
    return frame.render()


def bar_chart(
    labels: Sequence[str],
    values: Sequence[float],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 720,
    height: int = 460,
    colors: Optional[Sequence[str]] = None,
) -> str:
    if len(labels) != len(values) or not labels:
        raise ValueError("labels and values must be nonempty and equal length")
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        raise ValueError("no finite data to plot")
    lo, hi = min(0.0, min(finite)), max(0.0, max(finite))
    frame = _Frame(width, height, title, xlabel, ylabel)
    frame.set_limits(0, len(values), lo, hi + 0.05 * (hi - lo if hi > lo else 1.0))
    frame.draw_axes(
        x_ticks=[i + 0.5 for i in range(len(labels))],
        x_tick_labels=[str(lbl) for lbl in labels],
    )
    bar_w = 0.72 * (frame.px(1) - frame.px(0))
    for i, v in enumerate(values):
        if not math.isfinite(v):
            continue
        color = colors[i] if colors else _SERIES_COLORS[0]
        x = frame.px(i + 0.5) - bar_w / 2
        y0, y1 = frame.py(max(0.0, v)), frame.py(min(0.0, v))
        frame.parts.append(
            f"<rect x='{x:.2f}' y='{y0:.2f}' width='{bar_w:.2f}' "
            f"height='{max(y1 - y0, 0.5):.2f}' fill='{color}'/>"
        )
    return frame.render()

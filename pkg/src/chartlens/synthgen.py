"""Deterministic synthetic chart generator with exact ground truth.

Charts are rasterized in-process (rectangles, polygon wedges, Bresenham
polylines, bitmap text) rather than through a plotting library, so the
ground-truth geometry equals the painted pixels exactly and the same spec
(including seed) reproduces byte-identical images on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chartlens import _font, kernels
from chartlens.geometry import (
    Box,
    ChartImage,
    ChartKind,
    MarkSet,
    Polygon,
    Region,
    round_half_away,
)

LIGHT_THEME = {"bg": (255, 255, 255), "fg": (40, 40, 40), "grid": (210, 210, 210)}
DARK_THEME = {"bg": (30, 30, 32), "fg": (220, 220, 220), "grid": (72, 72, 76)}

LIGHT_PALETTE = (
    (197, 58, 50),
    (55, 108, 196),
    (64, 160, 86),
    (222, 158, 54),
    (142, 78, 186),
    (66, 170, 178),
    (200, 96, 146),
    (123, 124, 58),
)

DARK_PALETTE = (
    (235, 105, 98),
    (108, 158, 235),
    (110, 205, 128),
    (240, 196, 92),
    (178, 120, 225),
    (96, 212, 212),
    (230, 140, 190),
    (190, 190, 110),
)


def _channel_distance(a, b) -> int:
    return max(abs(a[i] - b[i]) for i in range(3))


@dataclass(frozen=True)
class ChartSpec:
    """Everything a generator needs; hashable and fully deterministic."""

    kind: ChartKind
    values: tuple[tuple[float, ...], ...]  # one inner tuple per series
    categories: tuple[str, ...] = ()
    x_values: tuple[float, ...] = ()
    theme: str = "light"
    palette: tuple[tuple[int, int, int], ...] = LIGHT_PALETTE
    grid: bool = False
    ticks: bool = True
    font_scale: int = 1
    bar_layout: str = "grouped"  # or "stacked"; ignored for one series
    orientation: str = "vertical"  # or "horizontal"
    pie_borders: bool = False
    start_angle_deg: float = 0.0
    seed: int = 0
    canvas: tuple[int, int] = (640, 420)

    def __post_init__(self):
        object.__setattr__(self, "kind", ChartKind(self.kind))
        if self.theme not in ("light", "dark"):
            raise ValueError(f"unknown theme {self.theme!r}")
        if self.bar_layout not in ("grouped", "stacked"):
            raise ValueError(f"unknown bar_layout {self.bar_layout!r}")
        if self.orientation not in ("vertical", "horizontal"):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if len(self.values) < 1 or any(len(s) < 1 for s in self.values):
            raise ValueError("need at least one series with at least one value")
        flat = [v for s in self.values for v in s]
        if not all(math.isfinite(v) for v in flat):
            raise ValueError("values must be finite")
        if self.canvas[0] < 64 or self.canvas[1] < 64:
            raise ValueError("canvas too small")
        if self.font_scale not in (1, 2):
            raise ValueError("font_scale must be 1 or 2")
        pal = self.palette
        for i in range(len(pal)):
            for j in range(i + 1, len(pal)):
                if _channel_distance(pal[i], pal[j]) < 48:
                    raise ValueError(
                        f"palette colors {i} and {j} are closer than 48 levels"
                    )

    @property
    def theme_colors(self) -> dict:
        return LIGHT_THEME if self.theme == "light" else DARK_THEME


class Canvas:
    """Tiny deterministic rasterizer over a uint8 RGB array."""

    def __init__(self, width: int, height: int, bg):
        self.pixels = np.empty((height, width, 3), dtype=np.uint8)
        self.pixels[:] = bg
        self.width = width
        self.height = height

    def fill_rect(self, x0, y0, x1, y1, color):
        x0, y0 = max(0, x0), max(0, y0)
        x1, y1 = min(self.width, x1), min(self.height, y1)
        if x0 < x1 and y0 < y1:
            self.pixels[y0:y1, x0:x1] = color

    def fill_polygon(self, points, color):
        xs = np.array([p[0] for p in points], dtype=np.float64)
        ys = np.array([p[1] for p in points], dtype=np.float64)
        mask = kernels.fill_polygon(xs, ys, self.width, self.height)
        self.pixels[mask != 0] = color

    def draw_line(self, p0, p1, color, thickness: int = 1):
        """Bresenham; thickness t stamps a t x t block per line pixel."""
        x0, y0 = p0
        x1, y1 = p1
        dx, dy = abs(x1 - x0), -abs(y1 - y0)
        sx = 1 if x0 < x1 else -1
        sy = 1 if y0 < y1 else -1
        err = dx + dy
        while True:
            self.fill_rect(x0, y0, x0 + thickness, y0 + thickness, color)
            if x0 == x1 and y0 == y1:
                break
            e2 = 2 * err
            if e2 >= dy:
                err += dy
                x0 += sx
            if e2 <= dx:
                err += dx
                y0 += sy

    def draw_rect_outline(self, x0, y0, x1, y1, color, thickness: int = 1):
        t = thickness
        self.fill_rect(x0, y0, x1, y0 + t, color)
        self.fill_rect(x0, y1 - t, x1, y1, color)
        self.fill_rect(x0, y0, x0 + t, y1, color)
        self.fill_rect(x1 - t, y0, x1, y1, color)

    def draw_text(self, x, y, text, color, scale: int = 1):
        _font.draw_text(self.pixels, x, y, text, color, scale)


def _plot_rect(spec: ChartSpec):
    w, h = spec.canvas
    fs = spec.font_scale
    left = 40 + 10 * fs
    bottom = 20 + 12 * fs
    return left, 16, w - 18, h - bottom


def wedge_polygon(center, radius, a0, a1, step_deg: float = 2.0) -> Polygon:
    """Closed wedge: center plus the arc from a0 to a1 (radians, a1 > a0),
    sampled every `step_deg` with both endpoints included."""
    cx, cy = center
    span = a1 - a0
    n = max(2, int(math.ceil(span / math.radians(step_deg))) + 1)
    pts: list[tuple[int, int]] = [(round_half_away(cx), round_half_away(cy))]
    for i in range(n):
        a = a0 + span * i / (n - 1)
        x = round_half_away(cx + radius * math.cos(a))
        y = round_half_away(cy + radius * math.sin(a))
        if (x, y) != pts[-1]:
            pts.append((x, y))
    if pts[-1] == pts[0]:
        pts.pop()
    return Polygon(tuple(pts))


@dataclass(frozen=True)
class PieTruth:
    center: tuple[int, int]
    radius: float
    boundaries: tuple[float, ...]  # radians, ascending in [0, 2pi)


@dataclass(frozen=True)
class LineTruth:
    traces: tuple[tuple[tuple[int, int], ...], ...]  # per-series vertex pixels
    colors: tuple[tuple[int, int, int], ...]


# ---------------------------------------------------------------------------
# bar charts


def gen_bar_chart(spec: ChartSpec):
    """Returns (ChartImage, gt MarkSet, notes). gt regions are the exact
    painted bar rectangles, labeled B1..Bn by (x0, y0)."""
    if spec.kind != ChartKind.BAR:
        raise ValueError("spec.kind must be bar")
    if any(v < 0 for s in spec.values for v in s):
        raise ValueError("bar values must be non-negative")
    theme = spec.theme_colors
    w, h = spec.canvas
    canvas = Canvas(w, h, theme["bg"])
    px0, py0, px1, py1 = _plot_rect(spec)
    notes: list[str] = []

    n_series = len(spec.values)
    n_cat = len(spec.values[0])
    if any(len(s) != n_cat for s in spec.values):
        raise ValueError("all series must have the same number of categories")
    stacked = spec.bar_layout == "stacked" and n_series > 1

    if stacked:
        vmax = max(sum(s[c] for s in spec.values) for c in range(n_cat))
    else:
        vmax = max(v for s in spec.values for v in s)
    if vmax <= 0:
        raise ValueError("need at least one positive value")

    horizontal = spec.orientation == "horizontal"
    span = (px1 - px0) if not horizontal else (py1 - py0)
    depth = (py1 - py0) if not horizontal else (px1 - px0)
    slot = span / n_cat
    n_side_by_side = 1 if (stacked or n_series == 1) else n_series
    bar_w = int(slot * 0.7 / n_side_by_side)
    if bar_w < 4:
        raise ValueError("too many bars for canvas")

    if spec.grid:
        for k in range(1, 6):
            frac = k / 6
            if horizontal:
                gx = px0 + round_half_away(frac * depth)
                canvas.draw_line((gx, py0), (gx, py1 - 1), theme["grid"], 1)
            else:
                gy = py1 - 1 - round_half_away(frac * depth)
                canvas.draw_line((px0, gy), (px1 - 1, gy), theme["grid"], 1)

    rects: list[tuple[Box, tuple[int, int, int]]] = []  # painted bar rects
    for c in range(n_cat):
        slot_start = round_half_away((px0 if not horizontal else py0) + c * slot)
        group_off = round_half_away(slot * 0.15)
        stack_base = 0.0
        for s in range(n_series):
            v = spec.values[s][c]
            color = spec.palette[s % len(spec.palette)]
            if stacked:
                lo = stack_base
                hi = stack_base + v
                stack_base = hi
                a = round_half_away(lo / vmax * (depth - 2))
                b = round_half_away(hi / vmax * (depth - 2))
                length = b - a
                offset = a
                pos = slot_start + group_off
            else:
                length = round_half_away(v / vmax * (depth - 2))
                offset = 0
                pos = slot_start + group_off + s * bar_w
            if length <= 0:
                notes.append(f"series {s} category {c}: zero-size bar omitted")
                continue
            if horizontal:
                rect = Box(px0 + offset, pos, px0 + offset + length, pos + bar_w)
            else:
                rect = Box(pos, py1 - offset - length, pos + bar_w, py1 - offset)
            canvas.fill_rect(rect.x0, rect.y0, rect.x1, rect.y1, color)
            rects.append((rect, color))

    _draw_bar_axes(canvas, spec, px0, py0, px1, py1, vmax)

    rects.sort(key=lambda rc: (rc[0].x0, rc[0].y0))
    regions = tuple(
        Region(ChartKind.BAR, rect, label=f"B{i + 1}", anchor=_box_center(rect))
        for i, (rect, _) in enumerate(rects)
    )
    marks = MarkSet(chart_id=f"bar-{spec.seed}", regions=regions, warnings=tuple(notes))
    image = ChartImage(canvas.pixels, id=marks.chart_id)
    return image, marks, notes


def _box_center(b: Box) -> tuple[int, int]:
    return ((b.x0 + b.x1) // 2, (b.y0 + b.y1) // 2)


def _draw_bar_axes(canvas, spec, px0, py0, px1, py1, vmax):
    theme = spec.theme_colors
    fs = spec.font_scale
    # 2 px axis lines sit just outside the plot rect
    canvas.fill_rect(px0 - 3, py0, px0 - 1, py1 + 2, theme["fg"])
    canvas.fill_rect(px0 - 3, py1, px1, py1 + 2, theme["fg"])
    if spec.ticks:
        n_ticks = 4
        for k in range(n_ticks + 1):
            frac = k / n_ticks
            label = f"{vmax * frac:.0f}"
            if spec.orientation == "horizontal":
                tx = px0 + round_half_away(frac * (px1 - px0 - 2))
                canvas.fill_rect(tx, py1 + 2, tx + 1, py1 + 5, theme["fg"])
                canvas.draw_text(tx - 4 * fs, py1 + 7, label, theme["fg"], fs)
            else:
                ty = py1 - 1 - round_half_away(frac * (py1 - py0 - 2))
                canvas.fill_rect(px0 - 6, ty, px0 - 3, ty + 1, theme["fg"])
                tw, th = _font.text_size(label, fs)
                canvas.draw_text(px0 - 8 - tw, ty - th // 2, label, theme["fg"], fs)
    for c, name in enumerate(spec.categories):
        slot = (px1 - px0) / max(1, len(spec.categories))
        if spec.orientation == "horizontal":
            slot = (py1 - py0) / max(1, len(spec.categories))
            ty = py0 + round_half_away((c + 0.5) * slot)
            tw, th = _font.text_size(name, fs)
            canvas.draw_text(px0 - 8 - tw, ty - th // 2, name, theme["fg"], fs)
        else:
            tx = px0 + round_half_away((c + 0.5) * slot)
            tw, _ = _font.text_size(name, fs)
            canvas.draw_text(tx - tw // 2, py1 + 8 + 4 * fs, name, theme["fg"], fs)


# ---------------------------------------------------------------------------
# pie charts


def gen_pie_chart(spec: ChartSpec):
    """Returns (ChartImage, gt MarkSet, PieTruth). Wedges are painted from
    the same polygons that become ground truth."""
    if spec.kind != ChartKind.PIE:
        raise ValueError("spec.kind must be pie")
    values = spec.values[0]
    if len(spec.values) != 1:
        raise ValueError("pie charts take exactly one series")
    if len(values) < 2:
        raise ValueError("pie charts need at least 2 sectors")
    if any(v <= 0 for v in values):
        raise ValueError("pie values must be positive")
    total = float(sum(values))
    angles = [v / total * 2 * math.pi for v in values]
    if min(angles) < math.radians(2.0):
        raise ValueError("share below the 2 degree minimum renderable angle")

    theme = spec.theme_colors
    w, h = spec.canvas
    canvas = Canvas(w, h, theme["bg"])
    cx, cy = w / 2.0, h / 2.0
    radius = 0.38 * min(w, h)

    start = math.radians(spec.start_angle_deg) % (2 * math.pi)
    cuts = [start]
    for a in angles:
        cuts.append(cuts[-1] + a)
    # sector i spans [cuts[i], cuts[i+1])
    wedges = []
    for i in range(len(values)):
        poly = wedge_polygon((cx, cy), radius, cuts[i], cuts[i + 1])
        wedges.append((cuts[i] % (2 * math.pi), poly, spec.palette[i % len(spec.palette)]))

    for _, poly, color in wedges:
        canvas.fill_polygon(poly.points, color)
    if spec.pie_borders:
        for cut in cuts[:-1]:
            ex = round_half_away(cx + radius * math.cos(cut))
            ey = round_half_away(cy + radius * math.sin(cut))
            canvas.draw_line(
                (round_half_away(cx), round_half_away(cy)), (ex, ey), theme["fg"], 1
            )

    # label order: ascending start angle in [0, 2pi), i.e. clockwise from
    # the first boundary at or after angle zero (y axis points down)
    wedges.sort(key=lambda t: t[0])
    boundaries = tuple(sorted(c % (2 * math.pi) for c in cuts[:-1]))

    out_regions = []
    for i, (a0, poly, _) in enumerate(wedges):
        a1 = boundaries[(i + 1) % len(boundaries)]
        span = (a1 - a0) % (2 * math.pi)
        mid = a0 + span / 2.0
        anchor = (
            round_half_away(cx + 0.6 * radius * math.cos(mid)),
            round_half_away(cy + 0.6 * radius * math.sin(mid)),
        )
        out_regions.append(
            Region(ChartKind.PIE, poly, label=f"S{i + 1}", anchor=anchor)
        )

    marks = MarkSet(chart_id=f"pie-{spec.seed}", regions=tuple(out_regions))
    truth = PieTruth(
        center=(round_half_away(cx), round_half_away(cy)),
        radius=radius,
        boundaries=boundaries,
    )
    image = ChartImage(canvas.pixels, id=marks.chart_id)
    return image, marks, truth


# ---------------------------------------------------------------------------
# line charts


def gen_line_chart(spec: ChartSpec):
    """Returns (ChartImage, LineTruth). Ground truth is the exact vertex
    pixel coordinates per series; strokes are 2 px."""
    if spec.kind != ChartKind.LINE:
        raise ValueError("spec.kind must be line")
    n_pts = len(spec.values[0])
    if n_pts < 2:
        raise ValueError("line series need at least 2 points")
    if any(len(s) != n_pts for s in spec.values):
        raise ValueError("all series must share the x grid")
    xs = spec.x_values if spec.x_values else tuple(float(i) for i in range(n_pts))
    if len(xs) != n_pts:
        raise ValueError("x_values length mismatch")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x_values must be strictly increasing")

    theme = spec.theme_colors
    w, h = spec.canvas
    canvas = Canvas(w, h, theme["bg"])
    px0, py0, px1, py1 = _plot_rect(spec)

    flat = [v for s in spec.values for v in s]
    lo, hi = min(flat), max(flat)
    if hi == lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    if spec.grid:
        for k in range(1, 6):
            gy = py1 - 1 - round_half_away(k / 6 * (py1 - py0 - 2))
            canvas.draw_line((px0, gy), (px1 - 1, gy), theme["grid"], 1)
        for k in range(1, 8):
            gx = px0 + round_half_away(k / 8 * (px1 - px0 - 2))
            canvas.draw_line((gx, py0), (gx, py1 - 1), theme["grid"], 1)

    canvas.fill_rect(px0 - 3, py0, px0 - 1, py1 + 2, theme["fg"])
    canvas.fill_rect(px0 - 3, py1, px1, py1 + 2, theme["fg"])

    def to_px(xv, yv):
        fx = (xv - xs[0]) / (xs[-1] - xs[0])
        fy = (yv - lo) / (hi - lo)
        return (
            px0 + 2 + round_half_away(fx * (px1 - px0 - 6)),
            py1 - 2 - round_half_away(fy * (py1 - py0 - 5)),
        )

    traces = []
    colors = []
    for s, series in enumerate(spec.values):
        color = spec.palette[s % len(spec.palette)]
        verts = tuple(to_px(xv, yv) for xv, yv in zip(xs, series))
        for a, b in zip(verts, verts[1:]):
            canvas.draw_line(a, b, color, thickness=2)
        traces.append(verts)
        colors.append(color)

    truth = LineTruth(traces=tuple(traces), colors=tuple(colors))
    image = ChartImage(canvas.pixels, id=f"line-{spec.seed}")
    return image, truth


# ---------------------------------------------------------------------------
# randomized specs (seeded; used by tests, acceptance, and the CLI)


def random_spec(
    kind: ChartKind,
    seed: int,
    *,
    theme: str | None = None,
    n_elements: int | None = None,
    n_series: int | None = None,
    canvas: tuple[int, int] = (640, 420),
) -> ChartSpec:
    """Draw a chart spec from the supported style space. All segmentation
    guarantees assume the envelope enforced here (bar width >= 12 px at the
    default canvas, pie sectors >= 20 degrees, palette contrast)."""
    kind = ChartKind(kind)
    rng = np.random.default_rng(seed)
    theme = theme or ("light" if rng.integers(0, 2) == 0 else "dark")
    palette = LIGHT_PALETTE if theme == "light" else DARK_PALETTE
    shift = int(rng.integers(0, len(palette)))
    palette = palette[shift:] + palette[:shift]
    grid = bool(rng.integers(0, 2))
    ticks = bool(rng.integers(0, 2))
    font_scale = int(rng.integers(1, 3))

    if kind == ChartKind.BAR:
        layout = ("grouped", "stacked")[int(rng.integers(0, 2))]
        orientation = ("vertical", "horizontal")[int(rng.integers(0, 2))]
        if n_series is None:
            n_series = 1 if rng.random() < 0.5 else int(rng.integers(2, 4))
        max_cat = max(1, 12 // n_series) if layout == "grouped" else 12
        n_cat = n_elements or int(rng.integers(3, min(8, max_cat) + 1))
        values = tuple(
            tuple(float(rng.integers(25, 100)) for _ in range(n_cat))
            for _ in range(n_series)
        )
        categories = tuple(f"C{i + 1}" for i in range(n_cat))
        return ChartSpec(
            kind=kind,
            values=values,
            categories=categories,
            theme=theme,
            palette=palette,
            grid=grid,
            ticks=ticks,
            font_scale=font_scale,
            bar_layout=layout,
            orientation=orientation,
            seed=seed,
            canvas=canvas,
        )

    if kind == ChartKind.PIE:
        k = n_elements or int(rng.integers(3, 9))
        # every sector at least 21 degrees, exact total
        extras = rng.uniform(0.2, 1.0, k)
        degs = 21.0 + extras / extras.sum() * (360.0 - 21.0 * k)
        values = tuple(float(d) for d in degs)
        return ChartSpec(
            kind=kind,
            values=(values,),
            theme=theme,
            palette=palette,
            pie_borders=bool(rng.integers(0, 2)),
            start_angle_deg=float(rng.uniform(0, 360)),
            font_scale=font_scale,
            seed=seed,
            canvas=canvas,
        )

    n_series = n_series or int(rng.integers(1, 3))
    n_pts = n_elements or int(rng.integers(6, 13))
    values = []
    for s in range(n_series):
        base = rng.uniform(20, 80)
        wobble = np.cumsum(rng.uniform(-12, 12, n_pts)) + base + s * 45
        values.append(tuple(float(v) for v in wobble))
    return ChartSpec(
        kind=kind,
        values=tuple(values),
        theme=theme,
        palette=palette,
        grid=grid,
        ticks=ticks,
        font_scale=font_scale,
        seed=seed,
        canvas=canvas,
    )

"""Chart-domain geometry: regions, mark sets, rasterization, and IoU.

Conventions used throughout the package:

- Pixel coordinates are integers; sub-pixel values are rounded half away
  from zero before they enter a geometry.
- Boxes are half-open: a Box(x0, y0, x1, y1) covers pixels x0..x1-1 and
  y0..y1-1, so its area is (x1-x0)*(y1-y0).
- A pixel belongs to a polygon when its center (x+0.5, y+0.5) is inside
  under the even-odd rule (left/top boundary inclusive).
- Masks are run-length encoded over the row-major flattening, alternating
  run lengths starting with an "off" run (possibly 0).

All IoU values are computed on rasterized pixel sets so that boxes,
polygons, and masks compare on one footing.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from chartlens import kernels
from chartlens.errors import DimensionMismatchError


class ChartKind(str, Enum):
    BAR = "bar"
    PIE = "pie"
    LINE = "line"


def round_half_away(v: float) -> int:
    """Deterministic rounding: 0.5 goes away from zero on every platform."""
    return int(math.floor(v + 0.5)) if v >= 0 else -int(math.floor(-v + 0.5))


# ---------------------------------------------------------------------------
# images


@dataclass(frozen=True)
class ChartImage:
    """8-bit RGB raster with an opaque id. Immutable after construction."""

    pixels: np.ndarray
    id: str = ""

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError("pixels must have shape (height, width, 3)")
        if px.shape[0] < 16 or px.shape[1] < 16:
            raise ValueError("chart images must be at least 16x16 pixels")
        px = np.ascontiguousarray(px)
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


# ---------------------------------------------------------------------------
# geometries


@dataclass(frozen=True)
class Box:
    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self):
        for name in ("x0", "y0", "x1", "y1"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate box {self}")
        if self.x0 < 0 or self.y0 < 0:
            raise ValueError(f"negative box corner {self}")

    @property
    def area(self) -> int:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


def _segments_intersect(p1, p2, p3, p4) -> bool:
    # proper intersection or touching interior; shared endpoints allowed
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 0) - (v < 0)

    if p1 in (p3, p4) or p2 in (p3, p4):
        return False
    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True

    def on_seg(a, b, c):
        return (
            orient(a, b, c) == 0
            and min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    return on_seg(p1, p2, p3) or on_seg(p1, p2, p4) or on_seg(p3, p4, p1) or on_seg(p3, p4, p2)


@dataclass(frozen=True)
class Polygon:
    points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = tuple((int(x), int(y)) for x, y in self.points)
        if len(pts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        if any(x < 0 or y < 0 for x, y in pts):
            raise ValueError("negative polygon vertex")
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate polygon vertex")
        n = len(pts)
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            if a == b:
                raise ValueError("zero-length polygon edge")
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                c, d = pts[j], pts[(j + 1) % n]
                if _segments_intersect(a, b, c, d):
                    raise ValueError("polygon is self-intersecting")
        object.__setattr__(self, "points", pts)

    @property
    def bounds(self) -> Box:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return Box(min(xs), min(ys), max(xs) + 1, max(ys) + 1)


@dataclass(frozen=True)
class Mask:
    """RLE bitmap pinned to full chart dimensions."""

    rle: tuple[int, ...]
    width: int
    height: int

    def __post_init__(self):
        runs = tuple(int(r) for r in self.rle)
        if any(r < 0 for r in runs):
            raise ValueError("negative RLE run")
        if sum(runs) != self.width * self.height:
            raise ValueError("RLE runs do not cover width*height pixels")
        object.__setattr__(self, "rle", runs)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Mask":
        arr = np.asarray(arr)
        runs = kernels.rle_encode((arr != 0).astype(np.uint8))
        return cls(tuple(int(r) for r in runs), arr.shape[1], arr.shape[0])

    def to_array(self) -> np.ndarray:
        return kernels.rle_decode(
            np.asarray(self.rle, dtype=np.int64), self.width, self.height
        )


Geometry = Box | Polygon | Mask


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Region:
    """A chart element's spatial footprint plus its mark metadata.

    `anchor` is where the mark label gets drawn (and, for line segments,
    the trace point that stands in for the mark in endpoint-pair geometry).
    `refined` records whether mask refinement replaced the heuristic shape.
    """

    kind: ChartKind
    geometry: Geometry
    label: str | None = None
    anchor: tuple[int, int] | None = None
    refined: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ChartKind(self.kind))
        if self.anchor is not None:
            object.__setattr__(
                self, "anchor", (int(self.anchor[0]), int(self.anchor[1]))
            )

    def with_label(self, label: str) -> "Region":
        return replace(self, label=label)

    def bounds(self) -> Box:
        g = self.geometry
        if isinstance(g, Box):
            return g
        if isinstance(g, Polygon):
            return g.bounds
        return Box(0, 0, g.width, g.height)

    def validate_bounds(self, width: int, height: int) -> None:
        g = self.geometry
        if isinstance(g, Box):
            if g.x1 > width or g.y1 > height:
                raise ValueError(f"box {g} exceeds image {width}x{height}")
        elif isinstance(g, Polygon):
            if any(x >= width or y >= height for x, y in g.points):
                raise ValueError(f"polygon vertex outside image {width}x{height}")
        else:
            if (g.width, g.height) != (width, height):
                raise DimensionMismatchError(
                    f"mask is {g.width}x{g.height}, chart is {width}x{height}"
                )


def rasterize(geometry: Geometry, width: int, height: int) -> np.ndarray:
    """uint8 mask of shape (height, width) for any geometry."""
    if isinstance(geometry, Box):
        m = np.zeros((height, width), dtype=np.uint8)
        m[max(0, geometry.y0) : geometry.y1, max(0, geometry.x0) : geometry.x1] = 1
        return m
    if isinstance(geometry, Polygon):
        xs = np.array([p[0] for p in geometry.points], dtype=np.float64)
        ys = np.array([p[1] for p in geometry.points], dtype=np.float64)
        return kernels.fill_polygon(xs, ys, width, height)
    if (geometry.width, geometry.height) != (width, height):
        raise DimensionMismatchError(
            f"mask is {geometry.width}x{geometry.height}, requested "
            f"{width}x{height}"
        )
    return geometry.to_array()


def region_area(region: Region) -> int:
    """Exact pixel count of the rasterized geometry."""
    g = region.geometry
    if isinstance(g, Box):
        return g.area
    if isinstance(g, Mask):
        return sum(g.rle[1::2])
    b = g.bounds
    return int(rasterize(g, b.x1, b.y1).sum())


def _canvas_for(a: Region, b: Region) -> tuple[int, int]:
    ga, gb = a.geometry, b.geometry
    mask_dims = [
        (g.width, g.height) for g in (ga, gb) if isinstance(g, Mask)
    ]
    if mask_dims:
        if len(mask_dims) == 2 and mask_dims[0] != mask_dims[1]:
            raise DimensionMismatchError(
                f"regions live on different charts: {mask_dims[0]} vs {mask_dims[1]}"
            )
        w, h = mask_dims[0]
        for r in (a, b):
            try:
                r.validate_bounds(w, h)
            except ValueError as exc:
                raise DimensionMismatchError(str(exc)) from None
        return w, h
    ba, bb = a.bounds(), b.bounds()
    return max(ba.x1, bb.x1), max(ba.y1, bb.y1)


def iou(a: Region, b: Region) -> float:
    """Intersection-over-union of the two rasterized regions."""
    ga, gb = a.geometry, b.geometry
    if isinstance(ga, Box) and isinstance(gb, Box):
        # analytic fast path; identical to counting raster pixels
        iw = min(ga.x1, gb.x1) - max(ga.x0, gb.x0)
        ih = min(ga.y1, gb.y1) - max(ga.y0, gb.y0)
        inter = iw * ih if (iw > 0 and ih > 0) else 0
        union = ga.area + gb.area - inter
        return inter / union
    w, h = _canvas_for(a, b)
    inter, union = kernels.mask_counts(
        rasterize(ga, w, h), rasterize(gb, w, h)
    )
    if union == 0:
        return 0.0
    return inter / union


def region_fingerprint(region: Region) -> int:
    """Stable 64-bit hash of a region's geometry; seeds deterministic RNGs."""
    blob = json.dumps(_geometry_to_json(region.geometry), sort_keys=True)
    return int.from_bytes(hashlib.sha256(blob.encode()).digest()[:8], "big")


# ---------------------------------------------------------------------------
# mark sets


@dataclass(frozen=True)
class MarkSet:
    """Ordered, labeled candidate regions for one chart."""

    chart_id: str
    regions: tuple[Region, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))
        object.__setattr__(self, "warnings", tuple(self.warnings))
        labels = [r.label for r in self.regions]
        if any(lbl is None or lbl == "" for lbl in labels):
            raise ValueError("every MarkSet region must carry a label")
        if len(set(labels)) != len(labels):
            raise ValueError("MarkSet labels must be unique")

    @property
    def labels(self) -> dict[str, int]:
        return {r.label: i for i, r in enumerate(self.regions)}

    def by_label(self, label: str) -> Region:
        return self.regions[self.labels[label]]

    def __len__(self) -> int:
        return len(self.regions)


# ---------------------------------------------------------------------------
# JSON encoding (documented byte-exactly in docs/DATASET.md)


def _geometry_to_json(g: Geometry) -> dict:
    if isinstance(g, Box):
        return {"type": "box", "x0": g.x0, "y0": g.y0, "x1": g.x1, "y1": g.y1}
    if isinstance(g, Polygon):
        return {"type": "polygon", "points": [[x, y] for x, y in g.points]}
    return {
        "type": "mask_rle",
        "width": g.width,
        "height": g.height,
        "rle": " ".join(str(r) for r in g.rle),
    }


def _geometry_from_json(obj: dict) -> Geometry:
    kind = obj.get("type")
    if kind == "box":
        return Box(obj["x0"], obj["y0"], obj["x1"], obj["y1"])
    if kind == "polygon":
        return Polygon(tuple((int(x), int(y)) for x, y in obj["points"]))
    if kind == "mask_rle":
        runs = tuple(int(t) for t in str(obj["rle"]).split())
        return Mask(runs, int(obj["width"]), int(obj["height"]))
    raise ValueError(f"unknown geometry type {kind!r}")


def region_to_json(region: Region) -> dict:
    out = {
        "kind": region.kind.value,
        "geometry": _geometry_to_json(region.geometry),
        "label": region.label,
    }
    if region.anchor is not None:
        out["anchor"] = [region.anchor[0], region.anchor[1]]
    if region.refined is not None:
        out["refined"] = region.refined
    return out


def region_from_json(obj: dict) -> Region:
    anchor = obj.get("anchor")
    return Region(
        kind=ChartKind(obj["kind"]),
        geometry=_geometry_from_json(obj["geometry"]),
        label=obj.get("label"),
        anchor=(anchor[0], anchor[1]) if anchor is not None else None,
        refined=obj.get("refined"),
    )


def markset_to_json(marks: MarkSet) -> dict:
    return {
        "chart_id": marks.chart_id,
        "regions": [region_to_json(r) for r in marks.regions],
        "warnings": list(marks.warnings),
    }


def markset_from_json(obj: dict) -> MarkSet:
    return MarkSet(
        chart_id=obj["chart_id"],
        regions=tuple(region_from_json(r) for r in obj["regions"]),
        warnings=tuple(obj.get("warnings", ())),
    )

"""Binarization, morphology, contour extraction, and contour statistics.

Shared by bar and pie segmentation. Everything here is a pure function of
pixel values; callers may parallelize across images freely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from chartlens import kernels
from chartlens.geometry import Box, ChartImage


@dataclass(frozen=True)
class BinaryImage:
    bits: np.ndarray  # bool, shape (height, width)
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits).astype(bool)
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]


@dataclass(frozen=True)
class Contour:
    """External boundary of one 8-connected foreground component."""

    boundary: tuple[tuple[int, int], ...]  # (x, y) pixel vertices, closed
    area: int  # component pixel count
    solidity: float  # area / convex-hull pixel area, in (0, 1]
    bbox: Box


def grayscale(pixels: np.ndarray) -> np.ndarray:
    """Integer BT.601 luma; deterministic across platforms."""
    px = pixels.astype(np.uint32)
    return ((299 * px[..., 0] + 587 * px[..., 1] + 114 * px[..., 2] + 500) // 1000).astype(
        np.uint8
    )


def otsu_threshold(channel: np.ndarray) -> int | None:
    """Threshold t maximizing between-class variance; classes are values
    <= t and > t. None when the channel has zero variance."""
    hist = np.bincount(channel.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    omega = np.cumsum(hist) / total
    mu = np.cumsum(hist * np.arange(256)) / total
    mu_t = mu[-1]
    denom = omega * (1.0 - omega)
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_b = np.where(denom > 0, (mu_t * omega - mu) ** 2 / denom, 0.0)
    if not np.any(sigma_b > 0):
        return None
    return int(np.argmax(sigma_b))


def detect_dark_background(img: ChartImage) -> bool:
    """True when the mean luminance of the 2-pixel image border is < 128."""
    gray = grayscale(img.pixels)
    interior = gray[2:-2, 2:-2]
    border_sum = int(gray.sum()) - int(interior.sum())
    border_count = gray.size - interior.size
    return border_sum / border_count < 128.0


def binarize(img: ChartImage) -> BinaryImage:
    """Otsu foreground over the RGB-luma and HSV-value channels, OR-fused.

    By default the darker side of each threshold is foreground (charts are
    usually drawn dark-on-light); on a dark background the fused result is
    inverted instead. A zero-variance image yields empty foreground and a
    warning.
    """
    gray = grayscale(img.pixels)
    value = img.pixels.max(axis=2)  # HSV V channel
    fg = np.zeros(gray.shape, dtype=bool)
    got_any = False
    for channel in (gray, value):
        t = otsu_threshold(channel)
        if t is None:
            continue
        got_any = True
        fg |= channel <= t
    if not got_any:
        return BinaryImage(fg, warnings=("uniform image: no foreground found",))
    if detect_dark_background(img):
        fg = ~fg
    return BinaryImage(fg)


def morph_clean(b: BinaryImage) -> BinaryImage:
    """One 3x3 opening then one 3x3 closing."""
    m = b.bits.astype(np.uint8)
    opened = kernels.dilate3(kernels.erode3(m))
    closed = kernels.erode3(kernels.dilate3(opened))
    return BinaryImage(closed.astype(bool), warnings=b.warnings)


def _trace_boundary(mask: np.ndarray, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Moore-neighbor boundary trace from the top-left-most pixel, clockwise,
    with Jacob's stopping criterion. Returns (x, y) vertices."""
    h, w = mask.shape
    # neighbor order: E, SE, S, SW, W, NW, N, NE
    offs = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]

    def at(x, y):
        return 0 <= x < w and 0 <= y < h and mask[y, x]

    sx, sy = start
    boundary = [(sx, sy)]
    # entered the start pixel moving east (coming from the west neighbor)
    prev_dir = 0
    cx, cy = sx, sy
    first_exit = None
    while True:
        # scan neighbors clockwise starting just after the backtrack direction
        back = (prev_dir + 4) % 8
        found = False
        for k in range(1, 9):
            d = (back + k) % 8
            nx, ny = cx + offs[d][0], cy + offs[d][1]
            if at(nx, ny):
                if (cx, cy) == (sx, sy):
                    if first_exit is None:
                        first_exit = d
                    elif d == first_exit and len(boundary) > 1:
                        return boundary[:-1] if boundary[-1] == (sx, sy) else boundary
                cx, cy = nx, ny
                prev_dir = d
                boundary.append((cx, cy))
                found = True
                break
        if not found:
            return boundary  # isolated pixel
        if len(boundary) > 4 * mask.size:
            raise RuntimeError("boundary trace failed to terminate")


def convex_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Andrew monotone chain; returns hull vertices counter-clockwise in
    image coordinates. Fewer than 3 input points come back unchanged."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _component_stats(comp: np.ndarray, off_x: int, off_y: int):
    """(area, solidity, bbox, boundary) for a component mask crop."""
    ys, xs = np.nonzero(comp)
    area = int(len(xs))
    x0, x1 = int(xs.min()), int(xs.max()) + 1
    y0, y1 = int(ys.min()), int(ys.max()) + 1
    start_idx = np.lexsort((xs, ys))[0]  # topmost, then leftmost
    boundary_local = _trace_boundary(comp, (int(xs[start_idx]), int(ys[start_idx])))
    hull = convex_hull(boundary_local)
    if len(hull) >= 3:
        hx = np.array([p[0] for p in hull], dtype=np.float64)
        hy = np.array([p[1] for p in hull], dtype=np.float64)
        hull_mask = kernels.fill_polygon(hx, hy, comp.shape[1], comp.shape[0])
        hull_area = int(np.count_nonzero(hull_mask | (comp != 0)))
    else:
        hull_area = area
    solidity = area / hull_area
    boundary = tuple((x + off_x, y + off_y) for x, y in boundary_local)
    bbox = Box(x0 + off_x, y0 + off_y, x1 + off_x, y1 + off_y)
    return area, solidity, bbox, boundary


def extract_contours(b: BinaryImage) -> list[Contour]:
    """External boundaries of 8-connected foreground components, ordered by
    their bounding box (top, left)."""
    mask = b.bits.astype(np.uint8)
    labels, count = kernels.label_components(mask)
    contours = []
    for idx, sl in enumerate(ndimage.find_objects(labels, max_label=count), start=1):
        if sl is None:
            continue
        comp = labels[sl] == idx
        area, solidity, bbox, boundary = _component_stats(
            comp, sl[1].start, sl[0].start
        )
        contours.append(Contour(boundary=boundary, area=area, solidity=solidity, bbox=bbox))
    contours.sort(key=lambda c: (c.bbox.y0, c.bbox.x0, c.bbox.y1, c.bbox.x1))
    return contours


def min_enclosing_circle(points) -> tuple[float, float, float]:
    """Smallest circle containing every point; (cx, cy, r).

    Welzl-style progressive enlargement over a deterministic shuffle. Input
    is a Contour or any iterable of (x, y); a single point gives r = 0.
    """
    if isinstance(points, Contour):
        points = points.boundary
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise ValueError("min_enclosing_circle of empty point set")
    uniq = sorted(set(pts))
    if len(uniq) == 1:
        return uniq[0][0], uniq[0][1], 0.0
    hull = convex_hull([(x, y) for x, y in uniq])
    pts = [(float(x), float(y)) for x, y in hull] if len(hull) >= 2 else uniq
    rng = np.random.default_rng(1234567891)
    pts = [pts[i] for i in rng.permutation(len(pts))]

    def circle_two(p, q):
        cx = (p[0] + q[0]) / 2.0
        cy = (p[1] + q[1]) / 2.0
        r = ((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2) ** 0.5 / 2.0
        return cx, cy, r

    def circle_three(p, q, s):
        ax, ay = p
        bx, by = q
        cx_, cy_ = s
        d = 2.0 * (ax * (by - cy_) + bx * (cy_ - ay) + cx_ * (ay - by))
        if d == 0.0:
            # collinear: widest pair
            cands = [circle_two(p, q), circle_two(p, s), circle_two(q, s)]
            return max(cands, key=lambda c: c[2])
        ux = (
            (ax * ax + ay * ay) * (by - cy_)
            + (bx * bx + by * by) * (cy_ - ay)
            + (cx_ * cx_ + cy_ * cy_) * (ay - by)
        ) / d
        uy = (
            (ax * ax + ay * ay) * (cx_ - bx)
            + (bx * bx + by * by) * (ax - cx_)
            + (cx_ * cx_ + cy_ * cy_) * (bx - ax)
        ) / d
        r = ((ax - ux) ** 2 + (ay - uy) ** 2) ** 0.5
        return ux, uy, r

    def inside(c, p):
        return (p[0] - c[0]) ** 2 + (p[1] - c[1]) ** 2 <= c[2] ** 2 * (1 + 1e-12) + 1e-9

    c = circle_two(pts[0], pts[1])
    for i in range(2, len(pts)):
        if inside(c, pts[i]):
            continue
        c = (pts[i][0], pts[i][1], 0.0)
        for j in range(i):
            if inside(c, pts[j]):
                continue
            c = circle_two(pts[i], pts[j])
            for k in range(j):
                if inside(c, pts[k]):
                    continue
                c = circle_three(pts[i], pts[j], pts[k])
        if not all(inside(c, pts[j]) for j in range(i + 1)):
            raise RuntimeError("min enclosing circle failed to converge")
    return c

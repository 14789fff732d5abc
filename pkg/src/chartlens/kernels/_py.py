"""NumPy/SciPy implementations of the pixel kernels.

This is the fallback backend used when the compiled extension is not
available. Both backends must produce bit-identical outputs; any change to
the arithmetic here has to be mirrored in ``_native.pyx``.
"""

import numpy as np
from scipy import ndimage

_STRUCT8 = np.ones((3, 3), dtype=int)


def fill_polygon(xs, ys, width, height):
    """Rasterize a polygon with the pixel-center scanline rule.

    A pixel (x, y) is set when its center (x+0.5, y+0.5) has an odd number
    of polygon edges strictly to its right along the scanline, counting an
    edge when its half-open y-interval [ymin, ymax) contains y+0.5. Span
    starts are inclusive, ends exclusive: x in [ceil(a-0.5), ceil(b-0.5)).
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    out = np.zeros((height, width), dtype=np.uint8)
    n = len(xs)
    if n < 3:
        return out
    x0 = xs
    x1 = np.roll(xs, -1)
    y0 = ys
    y1 = np.roll(ys, -1)
    keep = y0 != y1
    x0, x1, y0, y1 = x0[keep], x1[keep], y0[keep], y1[keep]
    if len(y0) == 0:
        return out
    ymin = np.minimum(y0, y1)
    ymax = np.maximum(y0, y1)
    row_lo = max(0, int(np.ceil(np.min(ymin) - 0.5)))
    row_hi = min(height, int(np.ceil(np.max(ymax) - 0.5)) + 1)
    for y in range(row_lo, row_hi):
        yc = y + 0.5
        sel = (ymin <= yc) & (yc < ymax)
        if not sel.any():
            continue
        t = (yc - y0[sel]) / (y1[sel] - y0[sel])
        xi = np.sort(x0[sel] + t * (x1[sel] - x0[sel]))
        for k in range(0, len(xi) - 1, 2):
            start = int(np.ceil(xi[k] - 0.5))
            end = int(np.ceil(xi[k + 1] - 0.5))
            if start < 0:
                start = 0
            if end > width:
                end = width
            if start < end:
                out[y, start:end] = 1
    return out


def rle_encode(mask):
    """Run lengths over the row-major flattening, starting with an off run."""
    flat = np.asarray(mask, dtype=np.uint8).ravel()
    n = flat.size
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    change = np.flatnonzero(np.diff(flat)) + 1
    bounds = np.concatenate(([0], change, [n]))
    runs = np.diff(bounds).astype(np.int64)
    if flat[0] != 0:
        runs = np.concatenate(([0], runs))
    return runs


def rle_decode(runs, width, height):
    runs = np.asarray(runs, dtype=np.int64)
    if runs.size and runs.min() < 0:
        raise ValueError("negative run length")
    total = int(runs.sum())
    if total != width * height:
        raise ValueError(
            f"run lengths sum to {total}, expected {width * height}"
        )
    flat = np.zeros(width * height, dtype=np.uint8)
    bounds = np.concatenate(([0], np.cumsum(runs)))
    for i in range(1, len(runs), 2):
        flat[bounds[i] : bounds[i + 1]] = 1
    return flat.reshape(height, width)


def _shifted_reduce(mask, op, pad_value):
    padded = np.pad(mask, 1, constant_values=pad_value)
    views = [
        padded[dy : dy + mask.shape[0], dx : dx + mask.shape[1]]
        for dy in range(3)
        for dx in range(3)
    ]
    return op.reduce(views).astype(np.uint8)


def erode3(mask):
    """3x3 erosion; pixels outside the image count as foreground."""
    return _shifted_reduce(np.asarray(mask, dtype=np.uint8), np.minimum, 1)


def dilate3(mask):
    """3x3 dilation; pixels outside the image count as background."""
    return _shifted_reduce(np.asarray(mask, dtype=np.uint8), np.maximum, 0)


def label8(mask):
    labels, count = ndimage.label(np.asarray(mask, dtype=np.uint8), structure=_STRUCT8)
    return labels.astype(np.int32), int(count)


def chessboard_dt(mask):
    """Chessboard distance to the nearest background pixel (image border
    counts as background)."""
    mask = np.asarray(mask, dtype=np.uint8)
    padded = np.pad(mask, 1, constant_values=0)
    dist = ndimage.distance_transform_cdt(padded, metric="chessboard")
    return dist[1:-1, 1:-1].astype(np.int32)


def bilinear_sample(gray, px, py, fill):
    """Bilinear sample of a 2-D float image at (px, py); out-of-range
    positions (beyond pixel centers) read as `fill`."""
    gray = np.asarray(gray, dtype=np.float64)
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    h, w = gray.shape
    valid = (px >= 0.0) & (px <= w - 1.0) & (py >= 0.0) & (py <= h - 1.0)
    x0 = np.clip(np.floor(px).astype(np.int64), 0, w - 2)
    y0 = np.clip(np.floor(py).astype(np.int64), 0, h - 2)
    fx = px - x0
    fy = py - y0
    g00 = gray[y0, x0]
    g01 = gray[y0, x0 + 1]
    g10 = gray[y0 + 1, x0]
    g11 = gray[y0 + 1, x0 + 1]
    v0 = (1.0 - fx) * g00 + fx * g01
    v1 = (1.0 - fx) * g10 + fx * g11
    value = (1.0 - fy) * v0 + fy * v1
    return np.where(valid, value, float(fill))


def mask_counts(a, b):
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    inter = int(np.count_nonzero(a & b))
    union = int(np.count_nonzero(a | b))
    return inter, union

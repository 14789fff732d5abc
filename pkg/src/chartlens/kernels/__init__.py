"""Pixel kernels with a compiled core and a NumPy fallback.

The compiled extension (`chartlens.kernels._native`, built from Cython) is
preferred when importable; otherwise the NumPy/SciPy implementations in
`_py` are used. Set ``CHARTLENS_KERNELS=python`` or ``native`` to force a
backend. Both backends are bit-identical; `tests/test_kernels.py` holds the
parity suite and `benchmarks/bench_kernels.py` compares their speed.
"""

import os

import numpy as np

from chartlens.kernels import _py

_requested = os.environ.get("CHARTLENS_KERNELS", "auto").strip().lower()
if _requested not in ("auto", "native", "python"):
    raise RuntimeError(
        f"CHARTLENS_KERNELS={_requested!r} not recognized (auto|native|python)"
    )

_impl = None
if _requested in ("auto", "native"):
    try:
        from chartlens.kernels import _native as _impl  # type: ignore
    except ImportError:
        if _requested == "native":
            raise RuntimeError(
                "CHARTLENS_KERNELS=native but the compiled extension is not "
                "built; run `pip install -e .` with Cython available"
            )
if _impl is None:
    _impl = _py

BACKEND = "native" if _impl is not _py else "python"


def backend():
    """Name of the active kernel backend: 'native' or 'python'."""
    return BACKEND


def fill_polygon(xs, ys, width, height):
    """Rasterize a closed polygon into a uint8 mask of shape (height, width)."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be 1-D arrays of equal length")
    return _impl.fill_polygon(xs, ys, int(width), int(height))


def rle_encode(mask):
    """Encode a binary mask as alternating run lengths (off run first)."""
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    return _impl.rle_encode(mask)


def rle_decode(runs, width, height):
    """Decode run lengths back into a (height, width) uint8 mask."""
    runs = np.ascontiguousarray(runs, dtype=np.int64)
    return _impl.rle_decode(runs, int(width), int(height))


def erode3(mask):
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    return _impl.erode3(mask)


def dilate3(mask):
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    return _impl.dilate3(mask)


def label_components(mask):
    """8-connected component labels, renumbered in first-pixel scan order.

    Returns (labels, count) where labels is int32 with 0 as background and
    components numbered 1..count by the flat index of their first pixel.
    """
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    labels, count = _impl.label8(mask)
    if count <= 1:
        return labels, count
    flat = labels.ravel()
    values, first = np.unique(flat, return_index=True)
    nz = values != 0
    values, first = values[nz], first[nz]
    order = np.argsort(first, kind="stable")
    lut = np.zeros(int(values.max()) + 1, dtype=np.int32)
    lut[values[order]] = np.arange(1, count + 1, dtype=np.int32)
    return lut[labels], count


def chessboard_dt(mask):
    """Chessboard distance transform; off-image counts as background."""
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    return _impl.chessboard_dt(mask)


def bilinear_sample(gray, px, py, fill):
    """Sample gray bilinearly at float positions, `fill` outside the image."""
    gray = np.ascontiguousarray(gray, dtype=np.float64)
    if gray.ndim != 2 or gray.shape[0] < 2 or gray.shape[1] < 2:
        raise ValueError("gray must be 2-D with both sides >= 2")
    px = np.ascontiguousarray(px, dtype=np.float64)
    py = np.ascontiguousarray(py, dtype=np.float64)
    if px.shape != py.shape:
        raise ValueError("px and py must have the same shape")
    return _impl.bilinear_sample(gray, px, py, float(fill))


def mask_counts(a, b):
    """(intersection, union) pixel counts of two binary masks."""
    a = np.ascontiguousarray(a, dtype=np.uint8)
    b = np.ascontiguousarray(b, dtype=np.uint8)
    if a.shape != b.shape:
        raise ValueError(f"mask shapes differ: {a.shape} vs {b.shape}")
    return _impl.mask_counts(a, b)

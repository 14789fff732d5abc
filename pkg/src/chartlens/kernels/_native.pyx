# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled pixel kernels. Bit-identical to chartlens.kernels._py."""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, floor
from libc.stdlib cimport free, malloc

cnp.import_array()


def fill_polygon(double[::1] xs, double[::1] ys, int width, int height):
    cdef int n = xs.shape[0]
    out_arr = np.zeros((height, width), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    if n < 3 or width <= 0 or height <= 0:
        return out_arr

    cdef double* ex0 = <double*> malloc(n * sizeof(double))
    cdef double* ey0 = <double*> malloc(n * sizeof(double))
    cdef double* ex1 = <double*> malloc(n * sizeof(double))
    cdef double* ey1 = <double*> malloc(n * sizeof(double))
    cdef double* cross = <double*> malloc(n * sizeof(double))
    if ex0 == NULL or ey0 == NULL or ex1 == NULL or ey1 == NULL or cross == NULL:
        free(ex0); free(ey0); free(ex1); free(ey1); free(cross)
        raise MemoryError()

    cdef int m = 0
    cdef int i, j, k, y, start, end, nc
    cdef double ymin_all = 1e300, ymax_all = -1e300
    cdef double a, b, yc, t, xi, lo, hi
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        if ys[i] != ys[j]:
            ex0[m] = xs[i]; ey0[m] = ys[i]
            ex1[m] = xs[j]; ey1[m] = ys[j]
            lo = ys[i] if ys[i] < ys[j] else ys[j]
            hi = ys[j] if ys[j] > ys[i] else ys[i]
            if lo < ymin_all:
                ymin_all = lo
            if hi > ymax_all:
                ymax_all = hi
            m += 1
    if m == 0:
        free(ex0); free(ey0); free(ex1); free(ey1); free(cross)
        return out_arr

    cdef int row_lo = <int> ceil(ymin_all - 0.5)
    cdef int row_hi = <int> ceil(ymax_all - 0.5) + 1
    if row_lo < 0:
        row_lo = 0
    if row_hi > height:
        row_hi = height

    for y in range(row_lo, row_hi):
        yc = y + 0.5
        nc = 0
        for i in range(m):
            lo = ey0[i] if ey0[i] < ey1[i] else ey1[i]
            hi = ey1[i] if ey1[i] > ey0[i] else ey0[i]
            if lo <= yc and yc < hi:
                t = (yc - ey0[i]) / (ey1[i] - ey0[i])
                xi = ex0[i] + t * (ex1[i] - ex0[i])
                cross[nc] = xi
                nc += 1
        # insertion sort, ascending
        for i in range(1, nc):
            a = cross[i]
            k = i - 1
            while k >= 0 and cross[k] > a:
                cross[k + 1] = cross[k]
                k -= 1
            cross[k + 1] = a
        for i in range(0, nc - 1, 2):
            start = <int> ceil(cross[i] - 0.5)
            end = <int> ceil(cross[i + 1] - 0.5)
            if start < 0:
                start = 0
            if end > width:
                end = width
            for j in range(start, end):
                out[y, j] = 1

    free(ex0); free(ey0); free(ex1); free(ey1); free(cross)
    return out_arr


def rle_encode(unsigned char[:, ::1] mask):
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    cdef Py_ssize_t n = h * w
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    runs = []
    cdef unsigned char cur = 0
    cdef long long run = 0
    cdef Py_ssize_t y, x
    cdef unsigned char v
    for y in range(h):
        for x in range(w):
            v = 1 if mask[y, x] != 0 else 0
            if v == cur:
                run += 1
            else:
                runs.append(run)
                cur = v
                run = 1
    runs.append(run)
    return np.asarray(runs, dtype=np.int64)


def rle_decode(long long[::1] runs, int width, int height):
    cdef Py_ssize_t nr = runs.shape[0]
    cdef long long total = 0
    cdef Py_ssize_t i
    for i in range(nr):
        if runs[i] < 0:
            raise ValueError("negative run length")
        total += runs[i]
    if total != <long long> width * height:
        raise ValueError(
            f"run lengths sum to {total}, expected {width * height}"
        )
    out_arr = np.zeros((height, width), dtype=np.uint8)
    cdef unsigned char[::1] flat = out_arr.ravel()
    cdef Py_ssize_t pos = 0, j
    for i in range(nr):
        if i % 2 == 1:
            for j in range(pos, pos + runs[i]):
                flat[j] = 1
        pos += runs[i]
    return out_arr


cdef inline unsigned char _at(unsigned char[:, ::1] m, Py_ssize_t y, Py_ssize_t x,
                              unsigned char outside) nogil:
    if y < 0 or x < 0 or y >= m.shape[0] or x >= m.shape[1]:
        return outside
    return 1 if m[y, x] != 0 else 0


def erode3(unsigned char[:, ::1] mask):
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t y, x
    cdef int dy, dx
    cdef unsigned char v
    for y in range(h):
        for x in range(w):
            v = 1
            for dy in range(-1, 2):
                for dx in range(-1, 2):
                    if _at(mask, y + dy, x + dx, 1) == 0:
                        v = 0
                        break
                if v == 0:
                    break
            out[y, x] = v
    return out_arr


def dilate3(unsigned char[:, ::1] mask):
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t y, x
    cdef int dy, dx
    cdef unsigned char v
    for y in range(h):
        for x in range(w):
            v = 0
            for dy in range(-1, 2):
                for dx in range(-1, 2):
                    if _at(mask, y + dy, x + dx, 0) != 0:
                        v = 1
                        break
                if v != 0:
                    break
            out[y, x] = v
    return out_arr


cdef int _find(int* parent, int i) nogil:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def label8(unsigned char[:, ::1] mask):
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    labels_arr = np.zeros((h, w), dtype=np.int32)
    cdef int[:, ::1] labels = labels_arr
    cdef Py_ssize_t cap = (h * w) // 2 + 2
    cdef int* parent = <int*> malloc(cap * sizeof(int))
    if parent == NULL:
        raise MemoryError()
    cdef int next_label = 1
    cdef Py_ssize_t y, x
    cdef int best, ra, rb, count = 0
    cdef int neigh[4]
    cdef int nn, i
    cdef int[::1] remap
    try:
        for y in range(h):
            for x in range(w):
                if mask[y, x] == 0:
                    continue
                nn = 0
                if x > 0 and labels[y, x - 1] != 0:
                    neigh[nn] = labels[y, x - 1]; nn += 1
                if y > 0:
                    if x > 0 and labels[y - 1, x - 1] != 0:
                        neigh[nn] = labels[y - 1, x - 1]; nn += 1
                    if labels[y - 1, x] != 0:
                        neigh[nn] = labels[y - 1, x]; nn += 1
                    if x + 1 < w and labels[y - 1, x + 1] != 0:
                        neigh[nn] = labels[y - 1, x + 1]; nn += 1
                if nn == 0:
                    parent[next_label] = next_label
                    labels[y, x] = next_label
                    next_label += 1
                else:
                    best = _find(parent, neigh[0])
                    for i in range(1, nn):
                        ra = _find(parent, neigh[i])
                        if ra < best:
                            best = ra
                    labels[y, x] = best
                    for i in range(nn):
                        rb = _find(parent, neigh[i])
                        if rb != best:
                            parent[rb] = best
        # compress to consecutive ids
        remap_arr = np.zeros(next_label, dtype=np.int32)
        remap = remap_arr
        for i in range(1, next_label):
            if _find(parent, i) == i:
                count += 1
                remap[i] = count
        for y in range(h):
            for x in range(w):
                if labels[y, x] != 0:
                    labels[y, x] = remap[_find(parent, labels[y, x])]
        return labels_arr, int(count)
    finally:
        free(parent)


def chessboard_dt(unsigned char[:, ::1] mask):
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    dist_arr = np.zeros((h, w), dtype=np.int32)
    cdef int[:, ::1] dist = dist_arr
    cdef int big = <int> (h + w + 2)
    cdef Py_ssize_t y, x
    cdef int d, v
    for y in range(h):
        for x in range(w):
            dist[y, x] = big if mask[y, x] != 0 else 0
    # forward pass: N, NW, NE, W (out of bounds reads as 0)
    for y in range(h):
        for x in range(w):
            if dist[y, x] == 0:
                continue
            d = dist[y, x]
            v = dist[y - 1, x - 1] if (y > 0 and x > 0) else 0
            if v + 1 < d: d = v + 1
            v = dist[y - 1, x] if y > 0 else 0
            if v + 1 < d: d = v + 1
            v = dist[y - 1, x + 1] if (y > 0 and x + 1 < w) else 0
            if v + 1 < d: d = v + 1
            v = dist[y, x - 1] if x > 0 else 0
            if v + 1 < d: d = v + 1
            dist[y, x] = d
    # backward pass: S, SW, SE, E
    for y in range(h - 1, -1, -1):
        for x in range(w - 1, -1, -1):
            if dist[y, x] == 0:
                continue
            d = dist[y, x]
            v = dist[y + 1, x + 1] if (y + 1 < h and x + 1 < w) else 0
            if v + 1 < d: d = v + 1
            v = dist[y + 1, x] if y + 1 < h else 0
            if v + 1 < d: d = v + 1
            v = dist[y + 1, x - 1] if (y + 1 < h and x > 0) else 0
            if v + 1 < d: d = v + 1
            v = dist[y, x + 1] if x + 1 < w else 0
            if v + 1 < d: d = v + 1
            dist[y, x] = d
    return dist_arr


def bilinear_sample(double[:, ::1] gray, px_arr, py_arr, double fill):
    px_c = np.ascontiguousarray(px_arr, dtype=np.float64)
    py_c = np.ascontiguousarray(py_arr, dtype=np.float64)
    shape = px_c.shape
    cdef double[::1] px = px_c.ravel()
    cdef double[::1] py = py_c.ravel()
    cdef Py_ssize_t n = px.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t h = gray.shape[0], w = gray.shape[1]
    cdef Py_ssize_t i, x0, y0
    cdef double fx, fy, v0, v1
    for i in range(n):
        if px[i] < 0.0 or px[i] > w - 1.0 or py[i] < 0.0 or py[i] > h - 1.0:
            out[i] = fill
            continue
        x0 = <Py_ssize_t> floor(px[i])
        if x0 > w - 2:
            x0 = w - 2
        if x0 < 0:
            x0 = 0
        y0 = <Py_ssize_t> floor(py[i])
        if y0 > h - 2:
            y0 = h - 2
        if y0 < 0:
            y0 = 0
        fx = px[i] - x0
        fy = py[i] - y0
        v0 = (1.0 - fx) * gray[y0, x0] + fx * gray[y0, x0 + 1]
        v1 = (1.0 - fx) * gray[y0 + 1, x0] + fx * gray[y0 + 1, x0 + 1]
        out[i] = (1.0 - fy) * v0 + fy * v1
    return out_arr.reshape(shape)


def mask_counts(unsigned char[:, ::1] a, unsigned char[:, ::1] b):
    cdef Py_ssize_t h = a.shape[0], w = a.shape[1]
    cdef long long inter = 0, union_ = 0
    cdef Py_ssize_t y, x
    cdef bint av, bv
    for y in range(h):
        for x in range(w):
            av = a[y, x] != 0
            bv = b[y, x] != 0
            if av and bv:
                inter += 1
            if av or bv:
                union_ += 1
    return int(inter), int(union_)

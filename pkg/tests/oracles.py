"""Independent brute-force oracles used by the test suite.

Nothing in here may call into chartlens' kernels or geometry rasterizer:
these loops are the ground truth the fast paths are checked against.
"""

import itertools

from chartlens.geometry import Box, Mask, Polygon


def rle_decode_bits(runs, width, height):
    """Straight-loop RLE decode, independent of the kernel codec."""
    bits = []
    on = False
    for run in runs:
        bits.extend([1 if on else 0] * run)
        on = not on
    assert len(bits) == width * height
    return [bits[y * width : (y + 1) * width] for y in range(height)]


def point_in_polygon(points, xc, yc):
    """Even-odd crossing test with a +x ray: count edges whose half-open
    y-span contains yc and whose crossing lies strictly right of xc."""
    crossings = 0
    n = len(points)
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        if y0 == y1:
            continue
        ymin, ymax = min(y0, y1), max(y0, y1)
        if ymin <= yc < ymax:
            t = (yc - y0) / (y1 - y0)
            xi = x0 + t * (x1 - x0)
            if xi > xc:
                crossings += 1
    return crossings % 2 == 1


def pixel_in_region(region, x, y):
    g = region.geometry
    if isinstance(g, Box):
        return g.x0 <= x < g.x1 and g.y0 <= y < g.y1
    if isinstance(g, Polygon):
        return point_in_polygon(g.points, x + 0.5, y + 0.5)
    if isinstance(g, Mask):
        return rle_decode_bits(g.rle, g.width, g.height)[y][x] == 1
    raise TypeError(type(g))


def brute_pixels(region, width, height):
    return {
        (x, y)
        for y in range(height)
        for x in range(width)
        if pixel_in_region(region, x, y)
    }


def brute_area(region, width, height):
    return len(brute_pixels(region, width, height))


def brute_iou(a, b, width, height):
    pa = brute_pixels(a, width, height)
    pb = brute_pixels(b, width, height)
    union = len(pa | pb)
    if union == 0:
        return 0.0
    return len(pa & pb) / union


def brute_union_area(regions, width, height):
    covered = set()
    for r in regions:
        covered |= brute_pixels(r, width, height)
    return len(covered)


def greedy_match_by_iou(iou_table, threshold):
    """Greedy matching straight from the rules: descending IoU, ties by
    (detected index, gt index); each side used at most once."""
    pairs = [
        (iou_val, di, gi)
        for (di, gi), iou_val in iou_table.items()
        if iou_val >= threshold
    ]
    pairs.sort(key=lambda p: (-p[0], p[1], p[2]))
    used_d, used_g, matches = set(), set(), []
    for iou_val, di, gi in pairs:
        if di in used_d or gi in used_g:
            continue
        used_d.add(di)
        used_g.add(gi)
        matches.append((di, gi, iou_val))
    return matches


def optimal_match_count(iou_table, threshold, n_detected, n_gt):
    """Maximum one-to-one matching size by exhaustive assignment."""
    best = 0
    gts = list(range(n_gt))
    for k in range(min(n_detected, n_gt), 0, -1):
        for dsub in itertools.combinations(range(n_detected), k):
            for gperm in itertools.permutations(gts, k):
                if all(
                    iou_table.get((d, g), 0.0) >= threshold
                    for d, g in zip(dsub, gperm)
                ):
                    return k
    return best

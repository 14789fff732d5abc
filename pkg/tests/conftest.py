import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chartlens.geometry import Box, ChartKind, Mask, Polygon, Region, region_area


def random_box(rng, width, height):
    x0 = int(rng.integers(0, width - 2))
    y0 = int(rng.integers(0, height - 2))
    x1 = int(rng.integers(x0 + 1, width))
    y1 = int(rng.integers(y0 + 1, height))
    return Region(ChartKind.BAR, Box(x0, y0, x1, y1))


def random_polygon(rng, width, height):
    """Star-shaped polygon: sorted angles around an interior center keep it
    simple even after rounding to integer pixels."""
    while True:
        cx = rng.uniform(width * 0.3, width * 0.7)
        cy = rng.uniform(height * 0.3, height * 0.7)
        n = int(rng.integers(3, 9))
        angles = np.sort(rng.uniform(0, 2 * math.pi, n))
        if np.min(np.diff(angles, append=angles[0] + 2 * math.pi)) < 0.25:
            continue
        rmax = min(cx, cy, width - 1 - cx, height - 1 - cy)
        if rmax < 5:
            continue
        radii = rng.uniform(4, rmax, n)
        pts = []
        for a, r in zip(angles, radii):
            pts.append((int(round(cx + r * math.cos(a))), int(round(cy + r * math.sin(a)))))
        try:
            poly = Polygon(tuple(pts))
        except ValueError:
            continue
        region = Region(ChartKind.PIE, poly)
        if region_area(region) == 0:
            continue  # sliver with no pixel centers inside
        return region


def random_mask(rng, width, height):
    bits = rng.random((height, width)) < rng.uniform(0.05, 0.6)
    if not bits.any():
        bits[int(rng.integers(0, height)), int(rng.integers(0, width))] = True
    return Region(ChartKind.BAR, Mask.from_array(bits))


def random_region(rng, width, height, kinds=("box", "polygon", "mask")):
    pick = kinds[int(rng.integers(0, len(kinds)))]
    if pick == "box":
        return random_box(rng, width, height)
    if pick == "polygon":
        return random_polygon(rng, width, height)
    return random_mask(rng, width, height)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)

"""Polygon and binary-mask primitives.

Masks are 2-D boolean numpy arrays indexed ``[y, x]``. Cell ``(x, y)``
covers the unit square ``[x, x+1) x [y, y+1)`` and is sampled at its
center ``(x + 0.5, y + 0.5)``. Polygons live in the same continuous
coordinate frame (x right, y down).
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPolygon, LabelNotFound, ShapeMismatch


@dataclass(frozen=True)
class Polygon:
    """Ordered vertex ring, shape (k, 2) float64, columns (x, y)."""

    vertices: np.ndarray

    @classmethod
    def from_points(cls, points):
        v = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        return cls(v)

    @property
    def area(self):
        v = self.vertices
        x, y = v[:, 0], v[:, 1]
        return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @property
    def bounds(self):
        v = self.vertices
        return v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max()


@dataclass
class LabeledRegions:
    """Connected-component labeling: 0 = background, labels 1..region_count."""

    label_grid: np.ndarray
    region_count: int


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _segments_cross(p, q, r, s):
    """True if segment pq properly crosses rs or they overlap collinearly."""
    d1 = _orient(*r, *s, *p)
    d2 = _orient(*r, *s, *q)
    d3 = _orient(*p, *q, *r)
    d4 = _orient(*p, *q, *s)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        # collinear: overlap test on the dominant axis
        axis = 0 if abs(q[0] - p[0]) >= abs(q[1] - p[1]) else 1
        lo1, hi1 = sorted((p[axis], q[axis]))
        lo2, hi2 = sorted((r[axis], s[axis]))
        return max(lo1, lo2) < min(hi1, hi2)
    return False


def is_self_intersecting(polygon):
    v = polygon.vertices
    k = len(v)
    edges = [(tuple(v[i]), tuple(v[(i + 1) % k])) for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if j == i or (j + 1) % k == i or (i + 1) % k == j:
                continue  # shared endpoint with a neighbor edge
            if _segments_cross(*edges[i], *edges[j]):
                return True
    return False


def validate_polygon(polygon, check_self_intersection=False):
    """Raise InvalidPolygon unless the ring is usable."""
    v = polygon.vertices
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise InvalidPolygon(f"need >=3 (x, y) vertices, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidPolygon("non-finite vertex coordinates")
    if polygon.area <= 0.0:
        raise InvalidPolygon("polygon has zero area")
    if check_self_intersection and is_self_intersecting(polygon):
        raise InvalidPolygon("polygon is self-intersecting")


def rasterize_polygon(polygon, width, height):
    """Even-odd fill: a cell is set iff its center lies inside the ring."""
    validate_polygon(polygon)
    if width < 1 or height < 1:
        raise ShapeMismatch(f"grid {width}x{height} must be at least 1x1")
    px = np.arange(width, dtype=np.float64) + 0.5
    py = (np.arange(height, dtype=np.float64) + 0.5)[:, None]
    inside = np.zeros((height, width), dtype=bool)
    v = polygon.vertices
    for i in range(len(v)):
        x0, y0 = v[i - 1]
        x1, y1 = v[i]
        if y0 == y1:
            continue
        crossing = (y0 > py) != (y1 > py)
        xc = (x1 - x0) * (py - y0) / (y1 - y0) + x0
        inside ^= crossing & (px < xc)
    return inside


_NEIGHBORS8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def connected_components(mask):
    """8-connected labeling; labels follow first-encountered raster order."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    count = 0
    for y, x in np.argwhere(mask):
        if labels[y, x]:
            continue
        count += 1
        queue = deque([(y, x)])
        labels[y, x] = count
        while queue:
            cy, cx = queue.popleft()
            for dy, dx in _NEIGHBORS8:
                ny, nx = cy + dy, cx + dx
                if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] and not labels[ny, nx]:
                    labels[ny, nx] = count
                    queue.append((ny, nx))
    return LabeledRegions(labels, count)


# Crack-boundary walker directions: R, D, L, U (image coords, y down).
_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def trace_contour(regions, label):
    """Trace the outer boundary of one region, clockwise in image coords.

    The contour follows cell edges, so rasterizing it back reproduces the
    region exactly (holes excepted). Diagonal pinch corners are crossed so
    an 8-connected region yields a single ring.
    """
    if not 1 <= label <= regions.region_count:
        raise LabelNotFound(f"label {label} not in 1..{regions.region_count}")
    grid = regions.label_grid == label
    h, w = grid.shape

    def fg(cx, cy):
        return 0 <= cx < w and 0 <= cy < h and grid[cy, cx]

    def outgoing(cx, cy):
        out = []
        if fg(cx, cy) and not fg(cx, cy - 1):
            out.append(0)  # R: cell below edge is fg
        if fg(cx - 1, cy) and not fg(cx, cy):
            out.append(1)  # D: cell left of edge is fg
        if fg(cx - 1, cy - 1) and not fg(cx - 1, cy):
            out.append(2)  # L: cell above edge is fg
        if fg(cx, cy - 1) and not fg(cx - 1, cy - 1):
            out.append(3)  # U: cell right of edge is fg
        return out

    sy, sx = np.argwhere(grid)[0]
    start = (int(sx), int(sy))
    corners, dirs = [], []
    pos, d = start, 0
    limit = 4 * (h + 2) * (w + 2) + 4
    for _ in range(limit):
        corners.append(pos)
        dirs.append(d)
        pos = (pos[0] + _DIRS[d][0], pos[1] + _DIRS[d][1])
        options = outgoing(*pos)
        for cand in ((d - 1) % 4, d, (d + 1) % 4):  # prefer left turn at pinches
            if cand in options:
                d = cand
                break
        else:
            raise AssertionError("boundary walk left the region edge set")
        if pos == start and d == 0:
            break
    else:
        raise AssertionError("boundary walk failed to close")

    verts = [corners[i] for i in range(len(corners)) if dirs[i] != dirs[i - 1]]
    return Polygon.from_points(verts)


def mask_iou(a, b):
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise ShapeMismatch(f"mask shapes differ: {a.shape} vs {b.shape}")
    union = np.logical_or(a, b).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(a, b).sum() / union)

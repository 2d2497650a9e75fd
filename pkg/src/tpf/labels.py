"""Training-label generation.

From ground-truth polygons on an (H, W) image this module builds, on the
quarter-resolution grid:

* the per-instance mask stack,
* equidistant interior center points per instance,
* the binary center-point mask,
* the n x n same-instance reinforcement matrix,
* the union foreground mask.

Center-point sampling rule (the published rounding rule): take the
instance's bounding box on the quarter grid; sample along x if box width
exceeds box height, else along y. The valid span is the central
``valid_fraction`` of the axis extent, half-open and centered
(``round(L * fraction)`` cells, half up). Among valid axis positions that
contain foreground, ``min(N, available)`` positions are picked by rounding
an even index spacing (half up); the cross-axis coordinate is the rounded
midpoint of the foreground span at that position, snapped to the nearest
foreground cell when the midpoint falls off the mask.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyMask, NoValidInstances, PointOutOfBounds
from .geometry import Polygon, rasterize_polygon

log = logging.getLogger(__name__)


@dataclass
class LabelConfig:
    points_per_text: int = 5
    valid_fraction: float = 0.5
    grid_scale: int = 4

    def __post_init__(self):
        if self.points_per_text < 1:
            raise ValueError("points_per_text must be >= 1")
        if not 0.0 < self.valid_fraction <= 1.0:
            raise ValueError("valid_fraction must be in (0, 1]")


def grid_dims(image_dims, scale=4):
    h, w = image_dims
    return math.ceil(h / scale), math.ceil(w / scale)


@dataclass
class InstanceMaskStack:
    masks: list
    dropped: list = field(default_factory=list)

    @property
    def count(self):
        return len(self.masks)


@dataclass
class CenterPointSet:
    coords: np.ndarray        # (n, 2) int64, columns (x, y) on the quarter grid
    instance_ids: np.ndarray  # (n,) int64 indices into the mask stack

    @property
    def n(self):
        return len(self.coords)


@dataclass
class LabelBundle:
    stack: InstanceMaskStack
    point_set: CenterPointSet
    center_mask: np.ndarray
    matrix: np.ndarray
    foreground: np.ndarray


def build_instance_stack(polygons, image_dims, config=None):
    scale = (config or LabelConfig()).grid_scale
    gh, gw = grid_dims(image_dims, scale)
    masks, dropped = [], []
    for idx, poly in enumerate(polygons):
        scaled = Polygon(poly.vertices / scale)
        mask = rasterize_polygon(scaled, gw, gh)
        if mask.any():
            masks.append(mask)
        else:
            dropped.append(idx)
            log.warning("polygon %d rasterizes empty on the %dx%d grid, dropped", idx, gw, gh)
    if not masks:
        raise NoValidInstances(f"none of {len(polygons)} polygons survive quarter-resolution rasterization")
    return InstanceMaskStack(masks, dropped)


def _round_half_up(value):
    return int(math.floor(value + 0.5))


def sample_center_points(mask, config=None):
    """Returns [(x, y), ...] interior cells, evenly spread along the long axis."""
    config = config or LabelConfig()
    mask = np.asarray(mask, dtype=bool)
    ys, xs = np.nonzero(mask)
    if len(xs) == 0:
        raise EmptyMask("cannot sample center points from an empty mask")

    w = xs.max() - xs.min() + 1
    h = ys.max() - ys.min() + 1
    along, cross = (xs, ys) if w > h else (ys, xs)

    a_lo, a_hi = int(along.min()), int(along.max())
    extent = a_hi - a_lo + 1
    valid_len = max(1, _round_half_up(extent * config.valid_fraction))
    lo = a_lo + (extent - valid_len) / 2.0
    first = math.ceil(lo)
    last = math.ceil(lo + valid_len)  # half-open upper bound
    available = [a for a in range(first, last) if np.any(along == a)]
    if not available:
        available = sorted(set(int(a) for a in along))

    k = min(config.points_per_text, len(available))
    if k == 1:
        picks = [available[_round_half_up((len(available) - 1) / 2.0)]]
    else:
        step = (len(available) - 1) / (k - 1)
        picks = [available[_round_half_up(j * step)] for j in range(k)]

    points = []
    for a in picks:
        span = cross[along == a]
        mid = _round_half_up((int(span.min()) + int(span.max())) / 2.0)
        if not np.any(span == mid):
            mid = int(span[np.argmin(np.abs(span - mid))])
        points.append((a, mid) if w > h else (mid, a))

    deduped = list(dict.fromkeys(points))
    return deduped


def build_center_point_mask(point_set, dims):
    gh, gw = dims
    mask = np.zeros((gh, gw), dtype=bool)
    for x, y in point_set.coords:
        if not (0 <= x < gw and 0 <= y < gh):
            raise PointOutOfBounds(f"point ({x}, {y}) outside {gw}x{gh} grid")
        mask[y, x] = True
    return mask


def build_reinforcement_matrix(point_set):
    ids = np.asarray(point_set.instance_ids)
    if len(ids) < 1:
        raise EmptyMask("reinforcement matrix needs at least one point")
    return (ids[:, None] == ids[None, :]).astype(np.uint8)


def build_foreground_mask(polygons, image_dims, config=None):
    scale = (config or LabelConfig()).grid_scale
    gh, gw = grid_dims(image_dims, scale)
    fg = np.zeros((gh, gw), dtype=bool)
    for poly in polygons:
        scaled = Polygon(poly.vertices / scale)
        fg |= rasterize_polygon(scaled, gw, gh)
    return fg


def compile_labels(polygons, image_dims, config=None):
    """Full label bundle for one scene."""
    config = config or LabelConfig()
    stack = build_instance_stack(polygons, image_dims, config)
    coords, ids = [], []
    for inst, mask in enumerate(stack.masks):
        for x, y in sample_center_points(mask, config):
            coords.append((x, y))
            ids.append(inst)
    point_set = CenterPointSet(
        np.array(coords, dtype=np.int64).reshape(-1, 2),
        np.array(ids, dtype=np.int64),
    )
    dims = grid_dims(image_dims, config.grid_scale)
    return LabelBundle(
        stack=stack,
        point_set=point_set,
        center_mask=build_center_point_mask(point_set, dims),
        matrix=build_reinforcement_matrix(point_set),
        foreground=build_foreground_mask(polygons, image_dims, config),
    )

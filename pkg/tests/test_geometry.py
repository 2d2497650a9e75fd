import numpy as np
import pytest

from tpf.errors import InvalidPolygon, LabelNotFound, ShapeMismatch
from tpf.geometry import (
    LabeledRegions,
    Polygon,
    connected_components,
    is_self_intersecting,
    mask_iou,
    rasterize_polygon,
    trace_contour,
    validate_polygon,
)


def point_in_polygon(px, py, verts):
    """Scalar even-odd oracle (classic crossing-number test)."""
    inside = False
    k = len(verts)
    for i in range(k):
        x0, y0 = verts[i - 1]
        x1, y1 = verts[i]
        if (y0 > py) != (y1 > py) and px < (x1 - x0) * (py - y0) / (y1 - y0) + x0:
            inside = not inside
    return inside


def rasterize_oracle(verts, width, height):
    out = np.zeros((height, width), dtype=bool)
    for y in range(height):
        for x in range(width):
            out[y, x] = point_in_polygon(x + 0.5, y + 0.5, verts)
    return out


def components_oracle(mask):
    """Union-find 8-connectivity oracle, independent of the BFS implementation."""
    h, w = mask.shape
    parent = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for y in range(h):
        for x in range(w):
            if mask[y, x]:
                parent[(y, x)] = (y, x)
    for y in range(h):
        for x in range(w):
            if not mask[y, x]:
                continue
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    ny, nx = y + dy, x + dx
                    if (dy or dx) and 0 <= ny < h and 0 <= nx < w and mask[ny, nx]:
                        union((y, x), (ny, nx))
    groups = {}
    for cell in parent:
        groups.setdefault(find(cell), set()).add(cell)
    return list(groups.values())


def random_convex_polygon(rng, width, height):
    k = rng.integers(3, 9)
    cx = rng.uniform(2, width - 2)
    cy = rng.uniform(2, height - 2)
    radius = rng.uniform(1.5, min(width, height) / 2.2)
    angles = np.sort(rng.uniform(0, 2 * np.pi, k))
    if np.min(np.diff(angles, append=angles[0] + 2 * np.pi)) < 0.05:
        angles = np.linspace(0, 2 * np.pi, k, endpoint=False)
    pts = np.stack([cx + radius * np.cos(angles), cy + radius * np.sin(angles)], axis=1)
    return Polygon.from_points(pts)


class TestRasterize:
    def test_axis_aligned_square(self):
        poly = Polygon.from_points([(0, 0), (2, 0), (2, 2), (0, 2)])
        mask = rasterize_polygon(poly, 4, 4)
        assert mask.sum() == 4
        assert mask[:2, :2].all()

    def test_two_vertices_rejected(self):
        with pytest.raises(InvalidPolygon):
            rasterize_polygon(Polygon.from_points([(0, 0), (1, 1)]), 4, 4)

    def test_zero_area_rejected(self):
        with pytest.raises(InvalidPolygon):
            rasterize_polygon(Polygon.from_points([(0, 0), (1, 1), (2, 2)]), 4, 4)

    def test_rotated_rectangle_matches_oracle(self):
        c, s = np.cos(np.pi / 4), np.sin(np.pi / 4)
        base = np.array([(-2.5, -1.0), (2.5, -1.0), (2.5, 1.0), (-2.5, 1.0)])
        rot = base @ np.array([[c, -s], [s, c]]).T + np.array([4.0, 4.0])
        poly = Polygon.from_points(rot)
        got = rasterize_polygon(poly, 8, 8)
        want = rasterize_oracle(poly.vertices, 8, 8)
        assert np.array_equal(got, want)

    def test_matches_oracle_on_random_convex(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            poly = random_convex_polygon(rng, 12, 12)
            got = rasterize_polygon(poly, 12, 12)
            want = rasterize_oracle(poly.vertices, 12, 12)
            assert np.array_equal(got, want)


class TestConnectedComponents:
    def test_single_cell(self):
        mask = np.zeros((4, 4), bool)
        mask[1, 2] = True
        assert connected_components(mask).region_count == 1

    def test_diagonal_touch_is_one_region(self):
        mask = np.zeros((4, 4), bool)
        mask[0, 0] = mask[1, 1] = True
        assert connected_components(mask).region_count == 1

    def test_partition_matches_flood_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            mask = rng.random((16, 16)) < 0.4
            got = connected_components(mask)
            want = components_oracle(mask)
            assert got.region_count == len(want)
            got_groups = {}
            for y, x in np.argwhere(mask):
                got_groups.setdefault(got.label_grid[y, x], set()).add((int(y), int(x)))
            assert sorted(map(sorted, got_groups.values())) == sorted(map(sorted, want))

    def test_label_order_is_raster_order(self):
        mask = np.zeros((4, 6), bool)
        mask[3, 0] = True
        mask[0, 5] = True
        regions = connected_components(mask)
        assert regions.label_grid[0, 5] == 1
        assert regions.label_grid[3, 0] == 2


class TestTraceContour:
    def test_filled_square(self):
        mask = np.zeros((5, 5), bool)
        mask[1:4, 1:4] = True
        poly = trace_contour(connected_components(mask), 1)
        assert len(poly.vertices) == 4
        back = rasterize_polygon(poly, 5, 5)
        assert np.array_equal(back, mask)

    def test_single_cell_unit_square(self):
        mask = np.zeros((3, 3), bool)
        mask[1, 1] = True
        poly = trace_contour(connected_components(mask), 1)
        assert sorted(map(tuple, poly.vertices.tolist())) == [
            (1.0, 1.0),
            (1.0, 2.0),
            (2.0, 1.0),
            (2.0, 2.0),
        ]

    def test_unknown_label(self):
        mask = np.ones((2, 2), bool)
        with pytest.raises(LabelNotFound):
            trace_contour(connected_components(mask), 5)

    def test_diagonal_pinch_encloses_both_cells(self):
        mask = np.zeros((3, 3), bool)
        mask[0, 0] = mask[1, 1] = True
        poly = trace_contour(connected_components(mask), 1)
        back = rasterize_polygon(poly, 3, 3)
        assert back[0, 0] and back[1, 1]

    def test_roundtrip_on_random_blobs(self):
        rng = np.random.default_rng(3)
        done = 0
        while done < 40:
            poly = random_convex_polygon(rng, 16, 16)
            mask = rasterize_polygon(poly, 16, 16)
            regions = connected_components(mask)
            if regions.region_count != 1 or mask.sum() < 9:
                continue
            ring = trace_contour(regions, 1)
            back = rasterize_polygon(ring, 16, 16)
            assert mask_iou(back, mask) >= 0.9
            done += 1

    def test_clockwise_image_coords(self):
        mask = np.zeros((4, 4), bool)
        mask[1:3, 1:3] = True
        poly = trace_contour(connected_components(mask), 1)
        x, y = poly.vertices[:, 0], poly.vertices[:, 1]
        signed = 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
        assert signed > 0  # positive = clockwise when y points down


class TestMaskIoU:
    def test_identical(self):
        m = np.zeros((4, 4), bool)
        m[1:3, 1:3] = True
        assert mask_iou(m, m) == 1.0

    def test_disjoint(self):
        a = np.zeros((4, 4), bool)
        b = np.zeros((4, 4), bool)
        a[0, 0] = True
        b[3, 3] = True
        assert mask_iou(a, b) == 0.0

    def test_partial_overlap(self):
        a = np.zeros((4, 4), bool)
        b = np.zeros((4, 4), bool)
        a[0:2, 0:2] = True
        b[1:3, 0:2] = True
        assert mask_iou(a, b) == pytest.approx(2 / 6)

    def test_both_empty(self):
        assert mask_iou(np.zeros((3, 3), bool), np.zeros((3, 3), bool)) == 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeMismatch):
            mask_iou(np.zeros((3, 3), bool), np.zeros((4, 4), bool))

    def test_symmetric_and_identity_property(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            a = rng.random((8, 8)) < 0.5
            b = rng.random((8, 8)) < 0.5
            assert mask_iou(a, b) == mask_iou(b, a)
            if a.any():
                assert (mask_iou(a, b) == 1.0) == np.array_equal(a, b)


class TestPolygonValidation:
    def test_bowtie_detected(self):
        bow = Polygon.from_points([(0, 0), (2, 2), (2, 0), (0, 2)])
        assert is_self_intersecting(bow)
        with pytest.raises(InvalidPolygon):
            validate_polygon(bow, check_self_intersection=True)

    def test_convex_ok(self):
        poly = Polygon.from_points([(0, 0), (3, 0), (3, 2), (0, 2)])
        validate_polygon(poly, check_self_intersection=True)
        assert not is_self_intersecting(poly)

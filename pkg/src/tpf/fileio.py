"""File formats: NetPBM images, polygon annotation lines, detection JSONL,
and on-disk label bundles.

Masks are stored as binary PGM (P5), maxval 255, foreground 255 / background
0. Images are binary PPM (P6). Annotations are one polygon per line,
``x1,y1,x2,y2,...`` in pixels. Detections are JSON lines of
``{"polygon": [[x, y], ...], "score": s}``.
"""

import json
import os

import numpy as np

from .errors import InvalidPolygon
from .geometry import Polygon, validate_polygon


def _read_netpbm_header(fh, magic):
    if fh.read(2) != magic:
        raise ValueError(f"not a {magic.decode()} file")
    fields = []
    while len(fields) < 3:
        line = fh.readline()
        if not line:
            raise ValueError("truncated netpbm header")
        text = line.split(b"#", 1)[0]
        fields.extend(int(tok) for tok in text.split())
    width, height, maxval = fields[:3]
    if maxval != 255:
        raise ValueError(f"unsupported maxval {maxval}")
    return width, height


def write_pgm(path, mask):
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write((mask.astype(np.uint8) * 255).tobytes())


def read_pgm(path):
    with open(path, "rb") as fh:
        w, h = _read_netpbm_header(fh, b"P5")
        data = np.frombuffer(fh.read(w * h), dtype=np.uint8)
    if data.size != w * h:
        raise ValueError("truncated PGM payload")
    return (data.reshape(h, w) >= 128)


def write_ppm(path, image):
    """image: (H, W, 3) floats in [0, 1]."""
    arr = np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0)
    data = np.floor(arr * 255.0 + 0.5).astype(np.uint8)
    h, w, _ = data.shape
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h))
        fh.write(data.tobytes())


def read_ppm(path):
    with open(path, "rb") as fh:
        w, h = _read_netpbm_header(fh, b"P6")
        data = np.frombuffer(fh.read(w * h * 3), dtype=np.uint8)
    if data.size != w * h * 3:
        raise ValueError("truncated PPM payload")
    return data.reshape(h, w, 3).astype(np.float64) / 255.0


def _format_coord(value):
    if value == int(value):
        return str(int(value))
    return repr(round(float(value), 6))


def polygon_to_line(polygon):
    return ",".join(_format_coord(c) for c in polygon.vertices.reshape(-1))


def parse_polygon_line(line, validate=True):
    try:
        coords = [float(tok) for tok in line.strip().split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise InvalidPolygon(f"bad coordinate in annotation line: {exc}") from exc
    if len(coords) < 6 or len(coords) % 2 != 0:
        raise InvalidPolygon(f"annotation line needs >=3 x,y pairs, got {len(coords)} numbers")
    poly = Polygon.from_points(np.array(coords).reshape(-1, 2))
    if validate:
        validate_polygon(poly, check_self_intersection=True)
    return poly


def write_polygon_lines(path, polygons):
    with open(path, "w", encoding="ascii") as fh:
        for poly in polygons:
            fh.write(polygon_to_line(poly) + "\n")


def read_polygon_lines(path, validate=True):
    polygons = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                polygons.append(parse_polygon_line(line, validate=validate))
            except InvalidPolygon as exc:
                raise InvalidPolygon(f"{path}:{lineno}: {exc}") from exc
    return polygons


def write_detections(path, detections):
    """detections: iterable with .polygon and .score attributes."""
    with open(path, "w", encoding="ascii") as fh:
        for det in detections:
            rec = {
                "polygon": [[float(x), float(y)] for x, y in det.polygon.vertices],
                "score": round(float(det.score), 6),
            }
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def read_detections(path):
    """Returns a list of (Polygon, score) pairs."""
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            out.append((Polygon.from_points(rec["polygon"]), float(rec["score"])))
    return out


def write_label_bundle(directory, bundle):
    """Writes foreground.pgm, centers.pgm, instances/<k>.pgm, matrix.csv, points.csv."""
    os.makedirs(os.path.join(directory, "instances"), exist_ok=True)
    write_pgm(os.path.join(directory, "foreground.pgm"), bundle.foreground)
    write_pgm(os.path.join(directory, "centers.pgm"), bundle.center_mask)
    for k, mask in enumerate(bundle.stack.masks):
        write_pgm(os.path.join(directory, "instances", f"{k}.pgm"), mask)
    with open(os.path.join(directory, "matrix.csv"), "w", encoding="ascii") as fh:
        for row in bundle.matrix:
            fh.write(",".join(str(int(v)) for v in row) + "\n")
    with open(os.path.join(directory, "points.csv"), "w", encoding="ascii") as fh:
        coords, ids = bundle.point_set.coords, bundle.point_set.instance_ids
        for (x, y), inst in zip(coords, ids):
            fh.write(f"{int(x)},{int(y)},{int(inst)}\n")


def read_label_bundle_points(directory):
    """Returns (coords (n,2) int array, instance_ids (n,) int array)."""
    coords, ids = [], []
    with open(os.path.join(directory, "points.csv"), "r", encoding="ascii") as fh:
        for line in fh:
            if not line.strip():
                continue
            x, y, inst = (int(tok) for tok in line.strip().split(","))
            coords.append((x, y))
            ids.append(inst)
    return np.array(coords, dtype=np.int64).reshape(-1, 2), np.array(ids, dtype=np.int64)


def read_matrix_csv(path):
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            if line.strip():
                rows.append([int(tok) for tok in line.strip().split(",")])
    return np.array(rows, dtype=np.uint8)

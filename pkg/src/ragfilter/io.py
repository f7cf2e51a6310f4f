"""Reading, writing, and exporting: images (PNG, binary PPM), edge CSV,
Graphviz DOT, and label matrices.

Every writer here is bit-stable: the same graph or image always produces the
same bytes.  Quantization is round-half-up so a mid-gray 0.5 becomes byte 128.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from PIL import Image as PILImage, UnidentifiedImageError

from .graph import RegionGraph
from .validation import check_image, check_label_matrix

CSV_HEADER = ("src,dst,color_distance,shared_pixels,perim_frac_src,perim_frac_dst,"
              "src_size,dst_size,src_r,src_g,src_b,dst_r,dst_g,dst_b")

# edge pen width in DOT output = this factor times the larger perimeter fraction
DOT_WIDTH_SCALE = 4.0

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def to_uint8(x: np.ndarray) -> np.ndarray:
    """Quantize [0, 1] reals to bytes, rounding half away from zero."""
    return np.clip(np.floor(x * 255.0 + 0.5), 0, 255).astype(np.uint8)


def from_uint8(b: np.ndarray) -> np.ndarray:
    return b.astype(np.float64) / 255.0


def _read_ppm(raw: bytes, path) -> np.ndarray:
    # binary P6, 8-bit: header tokens may be separated by whitespace/comments
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(raw) and raw[pos:pos + 1].isspace():
            pos += 1
        if pos < len(raw) and raw[pos:pos + 1] == b"#":
            while pos < len(raw) and raw[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise OSError(f"truncated PPM header: {path}")
        fields.append(raw[start:pos])
    pos += 1  # single whitespace after maxval
    try:
        w, h, maxval = (int(f) for f in fields)
    except ValueError:
        raise OSError(f"malformed PPM header: {path}") from None
    if maxval != 255:
        raise OSError(f"unsupported PPM maxval {maxval} (want 255): {path}")
    data = raw[pos:pos + w * h * 3]
    if len(data) < w * h * 3:
        raise OSError(f"truncated PPM pixel data: {path}")
    return np.frombuffer(data, dtype=np.uint8).reshape(h, w, 3).copy()


def read_image(path) -> np.ndarray:
    """Load an 8-bit RGB PNG or binary PPM as float64 in [0, 1]."""
    path = Path(path)
    raw = path.read_bytes()
    if raw[:2] == b"P6":
        return from_uint8(_read_ppm(raw, path))
    if raw[:8] == _PNG_MAGIC:
        try:
            with PILImage.open(path) as im:
                im.load()
                if im.mode != "RGB":
                    im = im.convert("RGB")
                return from_uint8(np.asarray(im, dtype=np.uint8))
        except UnidentifiedImageError:
            raise OSError(f"cannot decode PNG: {path}") from None
    raise OSError(f"unsupported image format (want PNG or binary PPM): {path}")


def write_image(image, path) -> None:
    """Write an image as PNG or binary PPM depending on the file extension."""
    x = check_image(image)
    path = Path(path)
    b = to_uint8(x)
    ext = path.suffix.lower()
    if ext == ".png":
        PILImage.fromarray(b, mode="RGB").save(path, format="PNG")
    elif ext in (".ppm", ".pnm"):
        header = f"P6\n{b.shape[1]} {b.shape[0]}\n255\n".encode("ascii")
        path.write_bytes(header + b.tobytes())
    else:
        raise ValueError(f"unsupported output extension {ext!r} (want .png or .ppm)")


def graph_to_image(g: RegionGraph) -> np.ndarray:
    """Paint every pixel with its node's mean color."""
    return g.colors[g.labels]


def edge_table(g: RegionGraph) -> dict[str, np.ndarray]:
    """Edge attributes as parallel columns, rows ascending by (src, dst)."""
    return {
        "src": g.edge_src,
        "dst": g.edge_dst,
        "color_distance": g.edge_color_dist,
        "shared_pixels": g.edge_shared,
        "perim_frac_src": g.perim_frac_src,
        "perim_frac_dst": g.perim_frac_dst,
        "src_size": g.sizes[g.edge_src],
        "dst_size": g.sizes[g.edge_dst],
        "src_color": g.colors[g.edge_src],
        "dst_color": g.colors[g.edge_dst],
    }


def write_graph_csv(g: RegionGraph, path) -> None:
    """Serialize the edge table; reals carry six decimals."""
    t = edge_table(g)
    lines = [CSV_HEADER]
    for k in range(g.edge_count):
        sc = t["src_color"][k]
        dc = t["dst_color"][k]
        lines.append(
            f"{t['src'][k]},{t['dst'][k]},{t['color_distance'][k]:.6f},"
            f"{t['shared_pixels'][k]},{t['perim_frac_src'][k]:.6f},"
            f"{t['perim_frac_dst'][k]:.6f},{t['src_size'][k]},{t['dst_size'][k]},"
            f"{sc[0]:.6f},{sc[1]:.6f},{sc[2]:.6f},{dc[0]:.6f},{dc[1]:.6f},{dc[2]:.6f}"
        )
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def read_graph_csv(path) -> dict[str, np.ndarray]:
    """Parse an edge CSV back into columns (ints exact, reals as written)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if ",".join(header) != CSV_HEADER:
            raise OSError(f"unexpected CSV header in {path}")
        rows = [row for row in reader if row]
    cols = list(zip(*rows)) if rows else [[] for _ in header]
    as_int = {"src", "dst", "shared_pixels", "src_size", "dst_size"}
    return {
        name: np.array([int(v) for v in col], dtype=np.int64) if name in as_int
        else np.array([float(v) for v in col])
        for name, col in zip(header, cols)
    }


def _hex_color(rgb: np.ndarray) -> str:
    r, g, b = to_uint8(rgb.reshape(1, 1, 3)).ravel()
    return f"#{r:02x}{g:02x}{b:02x}"


def write_graph_dot(g: RegionGraph, path) -> None:
    """Graphviz rendering: nodes filled with their mean color, edge width
    proportional to the larger of the two perimeter fractions."""
    lines = ["graph regions {", "  node [style=filled shape=circle];"]
    for i in range(g.node_count):
        lines.append(f'  n{i} [fillcolor="{_hex_color(g.colors[i])}" label="{i}"];')
    frac = np.maximum(g.perim_frac_src, g.perim_frac_dst)
    for k in range(g.edge_count):
        width = DOT_WIDTH_SCALE * frac[k]
        lines.append(
            f"  n{g.edge_src[k]} -- n{g.edge_dst[k]} [penwidth={width:.6f}];")
    lines.append("}")
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def write_label_matrix(labels, path) -> None:
    """Write a label matrix as one comma-separated row of ids per pixel row."""
    arr = check_label_matrix(labels)
    lines = [",".join(str(v) for v in row) for row in arr.tolist()]
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def read_label_matrix(path) -> np.ndarray:
    rows = []
    for line in Path(path).read_text("ascii").splitlines():
        if line:
            rows.append([int(v) for v in line.split(",")])
    if not rows:
        raise OSError(f"empty label matrix file: {path}")
    return np.array(rows, dtype=np.int64)

"""Core data model: an image partitioned into contiguous regions plus their adjacency.

Nodes are stored as parallel arrays indexed by node id.  Ids are always the
contiguous range 0..p-1, assigned in row-major order of each region's first
pixel, which keeps every derived artifact (CSV, DOT, labels) bit-stable.
Mean colors are backed by per-node sums over the *original* image pixels so
that averages stay exact and associative under merges.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import cached_property

import numpy as np


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class RegionNode:
    """Per-node view, materialized on demand."""

    id: int
    size: int
    color_sum: np.ndarray
    color: np.ndarray
    perimeter: int


@dataclass(frozen=True)
class RegionEdge:
    """Per-edge view, materialized on demand.  src < dst always."""

    src: int
    dst: int
    shared_pixels: int
    color_distance: float
    perim_frac_src: float
    perim_frac_dst: float


@dataclass(frozen=True)
class RegionGraph:
    """Immutable region-adjacency graph over one image.

    labels          (H, W) int64, node id per pixel
    sizes           (p,) pixel counts per node
    color_sums      (p, 3) sums of original pixel values per node
    colors          (p, 3) mean color per node
    perimeters      (p,) boundary side count per node (image border included)
    edge_src/dst    (m,) endpoint ids with src < dst, rows sorted ascending
    edge_shared     (m,) count of 4-adjacent pixel pairs straddling the edge
    edge_color_dist (m,) Euclidean distance between endpoint mean colors
    resolution      virtual resolution this partition corresponds to
    """

    labels: np.ndarray
    sizes: np.ndarray
    color_sums: np.ndarray
    colors: np.ndarray
    perimeters: np.ndarray
    edge_src: np.ndarray
    edge_dst: np.ndarray
    edge_shared: np.ndarray
    edge_color_dist: np.ndarray
    resolution: float

    def __post_init__(self):
        for name in ("labels", "sizes", "color_sums", "colors", "perimeters",
                     "edge_src", "edge_dst", "edge_shared", "edge_color_dist"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def node_count(self) -> int:
        return int(self.sizes.shape[0])

    @property
    def edge_count(self) -> int:
        return int(self.edge_src.shape[0])

    @cached_property
    def perim_frac_src(self) -> np.ndarray:
        """Fraction of the src node's perimeter shared with dst, per edge."""
        return _readonly(self.edge_shared / self.perimeters[self.edge_src])

    @cached_property
    def perim_frac_dst(self) -> np.ndarray:
        return _readonly(self.edge_shared / self.perimeters[self.edge_dst])

    def node(self, i: int) -> RegionNode:
        return RegionNode(
            id=int(i),
            size=int(self.sizes[i]),
            color_sum=self.color_sums[i],
            color=self.colors[i],
            perimeter=int(self.perimeters[i]),
        )

    def edge(self, k: int) -> RegionEdge:
        return RegionEdge(
            src=int(self.edge_src[k]),
            dst=int(self.edge_dst[k]),
            shared_pixels=int(self.edge_shared[k]),
            color_distance=float(self.edge_color_dist[k]),
            perim_frac_src=float(self.perim_frac_src[k]),
            perim_frac_dst=float(self.perim_frac_dst[k]),
        )

    def neighbors(self, i: int) -> np.ndarray:
        """Ids adjacent to node i, ascending."""
        out = np.concatenate([self.edge_dst[self.edge_src == i],
                              self.edge_src[self.edge_dst == i]])
        return np.sort(out)

    def with_resolution(self, r: float) -> "RegionGraph":
        return dataclasses.replace(self, resolution=float(r))


def node_count(g: RegionGraph) -> int:
    return g.node_count


def _recompute_adjacency(labels: np.ndarray, p: int):
    # straddling 4-adjacent pairs, canonicalized (lo, hi), multiplicity counted
    a = labels[:, :-1].ravel()
    b = labels[:, 1:].ravel()
    c = labels[:-1, :].ravel()
    d = labels[1:, :].ravel()
    u = np.concatenate([a, c])
    v = np.concatenate([b, d])
    diff = u != v
    u, v = u[diff], v[diff]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    keys, shared = np.unique(lo * np.int64(p) + hi, return_counts=True)
    return keys // p, keys % p, shared


def _recompute_perimeters(labels: np.ndarray, p: int) -> np.ndarray:
    per = np.bincount(labels[:, 0], minlength=p)
    per += np.bincount(labels[:, -1], minlength=p)
    per += np.bincount(labels[0, :], minlength=p)
    per += np.bincount(labels[-1, :], minlength=p)
    dh = labels[:, 1:] != labels[:, :-1]
    dv = labels[1:, :] != labels[:-1, :]
    per += np.bincount(labels[:, 1:][dh], minlength=p)
    per += np.bincount(labels[:, :-1][dh], minlength=p)
    per += np.bincount(labels[1:, :][dv], minlength=p)
    per += np.bincount(labels[:-1, :][dv], minlength=p)
    return per


def validate_graph(g: RegionGraph) -> str | None:
    """Check every structural invariant; return the first violation or None.

    The checks recompute adjacency, perimeters, and connectivity from the
    label matrix independently of the extraction code, so a bug there cannot
    mask itself here.  Correctness over speed.
    """
    p = g.node_count
    labels = g.labels
    h, w = labels.shape

    if p == 0:
        return "partition broken: graph has no nodes"
    if labels.min() < 0 or labels.max() >= p:
        return (f"partition broken: label ids outside 0..{p - 1} "
                f"(saw {labels.min()}..{labels.max()})")

    counts = np.bincount(labels.ravel(), minlength=p)
    if (counts == 0).any():
        missing = int(np.flatnonzero(counts == 0)[0])
        return f"partition broken: node {missing} owns no pixels"
    if int(counts.sum()) != h * w:
        return f"partition broken: sizes sum to {counts.sum()} != {h * w}"
    if not np.array_equal(counts, g.sizes):
        bad = int(np.flatnonzero(counts != g.sizes)[0])
        return (f"partition broken: node {bad} size {g.sizes[bad]} "
                f"!= pixel count {counts[bad]}")

    # contiguity: each id must form a single 4-connected component
    flat = labels.ravel()
    parent = np.arange(h * w, dtype=np.int64)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    idx = np.arange(h * w, dtype=np.int64).reshape(h, w)
    same_h = labels[:, 1:] == labels[:, :-1]
    same_v = labels[1:, :] == labels[:-1, :]
    pairs = np.concatenate([
        np.stack([idx[:, :-1][same_h], idx[:, 1:][same_h]], axis=1),
        np.stack([idx[:-1, :][same_v], idx[1:, :][same_v]], axis=1),
    ])
    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(i) for i in range(h * w)])
    n_components = np.unique(roots).size
    if n_components != p:
        return (f"partition broken: {n_components} connected components "
                f"for {p} node ids (some id is disconnected)")

    if not ((g.sizes > 0).all()):
        return f"partition broken: non-positive size at node {int(np.flatnonzero(g.sizes <= 0)[0])}"

    per = _recompute_perimeters(labels, p)
    if not np.array_equal(per, g.perimeters):
        bad = int(np.flatnonzero(per != g.perimeters)[0])
        return (f"perimeter mismatch: node {bad} stores {g.perimeters[bad]}, "
                f"label matrix gives {per[bad]}")

    mean = g.color_sums / g.sizes[:, None]
    if not np.allclose(g.colors, mean, rtol=0.0, atol=1e-6):
        bad = int(np.flatnonzero(~np.all(np.isclose(g.colors, mean, rtol=0.0, atol=1e-6), axis=1))[0])
        return f"color mismatch: node {bad} color differs from color_sum / size by > 1e-6"

    m = g.edge_count
    if m:
        if g.edge_src.min() < 0 or g.edge_dst.max() >= p or g.edge_src.max() >= p or g.edge_dst.min() < 0:
            return "dangling edge: endpoint id outside 0..p-1"
        if (g.edge_src >= g.edge_dst).any():
            k = int(np.flatnonzero(g.edge_src >= g.edge_dst)[0])
            return f"edge order broken: edge {k} has src {g.edge_src[k]} >= dst {g.edge_dst[k]}"
        key = g.edge_src * np.int64(p) + g.edge_dst
        if (np.diff(key) <= 0).any():
            return "edge order broken: rows not strictly ascending by (src, dst)"

    src, dst, shared = _recompute_adjacency(labels, p)
    if m != src.size:
        return (f"adjacency mismatch: graph stores {m} edges, "
                f"label matrix gives {src.size}")
    if m and not (np.array_equal(src, g.edge_src) and np.array_equal(dst, g.edge_dst)):
        return "adjacency mismatch: edge endpoint sets differ from label matrix"
    if m and not np.array_equal(shared, g.edge_shared):
        bad = int(np.flatnonzero(shared != g.edge_shared)[0])
        return (f"adjacency mismatch: edge ({g.edge_src[bad]}, {g.edge_dst[bad]}) "
                f"stores shared_pixels {g.edge_shared[bad]}, label matrix gives {shared[bad]}")

    if m:
        dist = np.sqrt(((g.colors[g.edge_src] - g.colors[g.edge_dst]) ** 2).sum(axis=1))
        if not np.allclose(dist, g.edge_color_dist, rtol=0.0, atol=1e-9):
            bad = int(np.flatnonzero(~np.isclose(dist, g.edge_color_dist, rtol=0.0, atol=1e-9))[0])
            return (f"edge distance mismatch: edge ({g.edge_src[bad]}, {g.edge_dst[bad]}) "
                    f"caches a distance inconsistent with node colors")

    if not (0.0 < g.resolution <= 1.0):
        return f"resolution out of range: {g.resolution!r}"
    return None

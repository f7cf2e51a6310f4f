"""Initial graph extraction: connected components of exactly-equal color.

The label pass is a deterministic union-find over the 4-neighbor pixel grid;
identical input always yields the identical label matrix no matter how the
surrounding pipeline is parallelized, because nothing here depends on
scheduling order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import RegionGraph, _recompute_adjacency, _recompute_perimeters
from .validation import check_image, check_label_matrix


class UnionFind:
    """Array-backed disjoint sets: union by size, path compression.

    Ties on size attach the larger root id under the smaller one, so the
    forest shape is a pure function of the union sequence.
    """

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)

    def find(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        sa, sb = self.size[ra], self.size[rb]
        if sa < sb or (sa == sb and rb < ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] = sa + sb
        return True

    def union_pairs(self, a: np.ndarray, b: np.ndarray) -> None:
        for x, y in zip(a.tolist(), b.tolist()):
            self.union(x, y)

    def roots(self) -> np.ndarray:
        """Fully resolved root per element (pointer jumping)."""
        parent = self.parent
        while True:
            grand = parent[parent]
            if np.array_equal(grand, parent):
                return parent
            parent = grand


def canonical_labels(raw: np.ndarray) -> tuple[np.ndarray, int]:
    """Renumber arbitrary ids to 0..p-1 by first occurrence in row-major order."""
    values, first, inverse = np.unique(raw.ravel(), return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty(order.size, dtype=np.int64)
    rank[order] = np.arange(order.size, dtype=np.int64)
    return rank[inverse].reshape(raw.shape), int(values.size)


@dataclass(frozen=True)
class EdgeSet:
    """Adjacency rows in canonical ascending (src, dst) order."""

    src: np.ndarray
    dst: np.ndarray
    shared_pixels: np.ndarray
    color_distance: np.ndarray

    def __len__(self) -> int:
        return int(self.src.size)


def _component_labels(x: np.ndarray) -> tuple[np.ndarray, int]:
    h, w = x.shape[:2]
    idx = np.arange(h * w, dtype=np.int64).reshape(h, w)
    eq_h = (x[:, 1:] == x[:, :-1]).all(axis=2)
    eq_v = (x[1:, :] == x[:-1, :]).all(axis=2)
    uf = UnionFind(h * w)
    uf.union_pairs(idx[:, :-1][eq_h], idx[:, 1:][eq_h])
    uf.union_pairs(idx[:-1, :][eq_v], idx[1:, :][eq_v])
    return canonical_labels(uf.roots().reshape(h, w))


def extract_edges(labels, image) -> EdgeSet:
    """Adjacency between differing 4-neighbor labels, with mean-color distances."""
    labels = check_label_matrix(labels)
    x = check_image(image)
    if labels.shape != x.shape[:2]:
        raise ValueError(
            f"labels shape {labels.shape} does not match image shape {x.shape[:2]}")
    p = int(labels.max()) + 1
    sizes = np.bincount(labels.ravel(), minlength=p)
    if (sizes == 0).any():
        raise ValueError("label ids must be contiguous 0..p-1")
    sums = np.zeros((p, 3))
    np.add.at(sums, labels.ravel(), x.reshape(-1, 3))
    colors = sums / sizes[:, None]
    src, dst, shared = _recompute_adjacency(labels, p)
    dist = np.sqrt(((colors[src] - colors[dst]) ** 2).sum(axis=1))
    return EdgeSet(src, dst, shared, dist)


def image_to_graph(image) -> RegionGraph:
    """Partition an image into maximal 4-connected regions of exactly equal color.

    Every pixel lands in exactly one node.  Node colors equal the (common)
    member pixel value, so reconstructing an image from the result reproduces
    the input bit for bit.  The returned graph carries resolution 1.0.
    """
    x = check_image(image)
    labels, p = _component_labels(x)

    sizes = np.bincount(labels.ravel(), minlength=p)
    # all pixels of a node share one color: take it from the node's first pixel
    _, first = np.unique(labels.ravel(), return_index=True)
    colors = x.reshape(-1, 3)[first]
    color_sums = sizes[:, None] * colors

    perimeters = _recompute_perimeters(labels, p)
    src, dst, shared = _recompute_adjacency(labels, p)
    dist = np.sqrt(((colors[src] - colors[dst]) ** 2).sum(axis=1))

    return RegionGraph(
        labels=labels,
        sizes=sizes,
        color_sums=color_sums,
        colors=colors,
        perimeters=perimeters,
        edge_src=src,
        edge_dst=dst,
        edge_shared=shared,
        edge_color_dist=dist,
        resolution=1.0,
    )

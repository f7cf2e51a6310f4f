"""Merge engine: collapse neighboring regions that become indistinguishable
as a virtual resolution decreases.

One step works in two phases so the result is order-independent: every node
first picks its best qualifying neighbor (smallest adjusted distance, ties to
the smaller id), then the whole candidate forest is contracted at once with a
union-find, so chains a-b-c collapse within a single step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .extract import UnionFind, canonical_labels, image_to_graph
from .graph import RegionGraph, _recompute_adjacency, _recompute_perimeters
from .io import graph_to_image
from .params import FilterParams


def color_distance(p, q) -> float:
    """Euclidean distance between two RGB colors."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    return float(np.sqrt(((p - q) ** 2).sum()))


def size_adjustment(s_i, s_j, r, alpha: float = 0.04, beta: float = 10.0):
    """Logistic factor in (0, 1] that discounts the distance between small regions.

    Grows with min(s_i, s_j) and with r; large regions at full resolution pass
    through almost unchanged.  Evaluated in log space so extreme inputs neither
    overflow nor underflow.  Accepts scalars or arrays.
    """
    s_min = np.minimum(np.asarray(s_i, dtype=np.float64), np.asarray(s_j, dtype=np.float64))
    r = np.asarray(r, dtype=np.float64)
    exponent = -alpha * (s_min - beta / r)
    out = np.exp(-np.logaddexp(0.0, exponent) / r)
    if out.ndim == 0:
        return float(out)
    return out


def adjusted_distance(c_i, c_j, s_i, s_j, r, alpha: float = 0.04, beta: float = 10.0) -> float:
    """Color distance scaled by the size adjustment."""
    return color_distance(c_i, c_j) * size_adjustment(s_i, s_j, r, alpha, beta)


def merge_threshold(d0: float, r, form: str = "t2", r_m: float = 0.1):
    """Distance below which two regions read as one at resolution r.

    t1: d0 / r.  t2: linear ramp d0 * (1 - r + r_m) / r_m, equal to d0 at
    r = 1 and growing as r falls toward the floor r_m.
    """
    r_arr = np.asarray(r, dtype=np.float64)
    if (r_arr <= 0).any() or (r_arr > 1).any():
        raise ValueError(f"resolution must lie in ]0, 1], got {r!r}")
    if form == "t1":
        out = d0 / r_arr
    elif form == "t2":
        if (r_arr < r_m).any():
            raise ValueError(f"t2 threshold undefined below r_m={r_m!r}, got r={r!r}")
        out = d0 * (1.0 - r_arr + r_m) / r_m
    else:
        raise ValueError(f"unknown threshold form {form!r}")
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class MergeStepReport:
    """What one merge step did."""

    resolution_before: float
    resolution_after: float
    merges_performed: int
    node_count_after: int
    threshold_value: float


def _candidate_arrays(g: RegionGraph, r: float, params: FilterParams):
    """Per-node best qualifying neighbor, as (nodes, choices) arrays."""
    if g.edge_count == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e
    tau = merge_threshold(params.d0, r, params.threshold_form, params.r_m)
    phi = size_adjustment(g.sizes[g.edge_src], g.sizes[g.edge_dst], r,
                          params.alpha, params.beta)
    d_a = g.edge_color_dist * phi
    ok = d_a < tau
    if not ok.any():
        e = np.empty(0, dtype=np.int64)
        return e, e
    src, dst, da = g.edge_src[ok], g.edge_dst[ok], d_a[ok]
    nodes = np.concatenate([src, dst])
    nbrs = np.concatenate([dst, src])
    da2 = np.concatenate([da, da])
    order = np.lexsort((nbrs, da2, nodes))
    nodes, nbrs = nodes[order], nbrs[order]
    _, first = np.unique(nodes, return_index=True)
    return nodes[first], nbrs[first]


def select_candidates(g: RegionGraph, r: float, params: FilterParams | None = None) -> dict[int, int]:
    """Map node -> neighbor it wants to merge with at resolution r.

    A node appears only if at least one incident edge has adjusted distance
    below the threshold; among those it takes the minimizer, ties broken by
    the smaller neighbor id.
    """
    params = params or FilterParams()
    nodes, choices = _candidate_arrays(g, r, params)
    return dict(zip(nodes.tolist(), choices.tolist()))


def merge_step(g: RegionGraph, r: float, params: FilterParams | None = None) -> tuple[RegionGraph, MergeStepReport]:
    """Contract all candidate pairs at resolution r and rebuild the graph.

    Node colors come out exact: the per-node sums over original pixels are
    added, never the running means.  With no candidates the partition is
    returned untouched (only the resolution label advances).
    """
    params = params or FilterParams()
    tau = merge_threshold(params.d0, r, params.threshold_form, params.r_m)
    p = g.node_count
    nodes, choices = _candidate_arrays(g, r, params)

    if nodes.size == 0:
        report = MergeStepReport(
            resolution_before=g.resolution,
            resolution_after=float(r),
            merges_performed=0,
            node_count_after=p,
            threshold_value=tau,
        )
        return g.with_resolution(r), report

    uf = UnionFind(p)
    uf.union_pairs(nodes, choices)
    root_of = uf.roots()

    labels, p2 = canonical_labels(root_of[g.labels])
    # old node id -> new id: every pixel of an old node maps to one new label,
    # so a scatter through the label matrices recovers the full mapping
    new_of_old = np.empty(p, dtype=np.int64)
    new_of_old[g.labels.ravel()] = labels.ravel()

    sizes = np.bincount(labels.ravel(), minlength=p2)
    color_sums = np.zeros((p2, 3))
    np.add.at(color_sums, new_of_old, g.color_sums)
    colors = color_sums / sizes[:, None]

    perimeters = _recompute_perimeters(labels, p2)
    src, dst, shared = _recompute_adjacency(labels, p2)
    dist = np.sqrt(((colors[src] - colors[dst]) ** 2).sum(axis=1))

    merged = RegionGraph(
        labels=labels,
        sizes=sizes,
        color_sums=color_sums,
        colors=colors,
        perimeters=perimeters,
        edge_src=src,
        edge_dst=dst,
        edge_shared=shared,
        edge_color_dist=dist,
        resolution=float(r),
    )
    report = MergeStepReport(
        resolution_before=g.resolution,
        resolution_after=float(r),
        merges_performed=p - p2,
        node_count_after=p2,
        threshold_value=tau,
    )
    return merged, report


def resolution_schedule(target_resolution: float, dr: float) -> list[float]:
    """Resolutions the merge loop visits: 1-dr, 1-2*dr, ... down to the target.

    When (1 - target) / dr is not an integer the count rounds up and the last
    step is evaluated at exactly the target, so no step ever drops below it.
    """
    n = math.ceil((1.0 - target_resolution) / dr - 1e-9)
    steps = [1.0 - k * dr for k in range(1, n + 1)]
    if steps and steps[-1] <= target_resolution + 1e-12:
        steps[-1] = target_resolution
    return steps


@dataclass(frozen=True)
class FilterResult:
    """Filtered image plus the graph and per-step reports behind it."""

    image: np.ndarray
    graph: RegionGraph
    reports: list[MergeStepReport] = field(default_factory=list)


def filter_image(image, params: FilterParams | None = None, on_step=None) -> FilterResult:
    """Run the full merge loop on an image.

    on_step, when given, is called after every step with (graph, report);
    handy for progressions and invariant checks.
    """
    params = (params or FilterParams()).validate()
    g = image_to_graph(image)
    reports = []
    for r in resolution_schedule(params.target_resolution, params.dr):
        g, rep = merge_step(g, r, params)
        reports.append(rep)
        if on_step is not None:
            on_step(g, rep)
    out = graph_to_image(g)
    return FilterResult(image=out, graph=g, reports=reports)

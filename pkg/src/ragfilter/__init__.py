"""Graph-driven image filtering.

An image is partitioned into regions of exactly equal color, the regions form
an adjacency graph, and neighboring regions whose colors become
indistinguishable at a decreasing virtual resolution are merged step by step.
The result is a texture-suppressed image plus the region graph behind it.
"""
from .denoise import (DenoiseResult, denoise, denoise_objective, surface_loss,
                      tv_loss)
from .estimators import GraphFilter, TVDenoiser
from .extract import EdgeSet, UnionFind, extract_edges, image_to_graph
from .graph import (RegionEdge, RegionGraph, RegionNode, node_count,
                    validate_graph)
from .io import (CSV_HEADER, edge_table, from_uint8, graph_to_image,
                 read_graph_csv, read_image, read_label_matrix, to_uint8,
                 write_graph_csv, write_graph_dot, write_image,
                 write_label_matrix)
from .merging import (FilterResult, MergeStepReport, adjusted_distance,
                      color_distance, filter_image, merge_step,
                      merge_threshold, resolution_schedule, select_candidates,
                      size_adjustment)
from .params import DenoiseParams, FilterParams

__version__ = "0.1.0"

__all__ = [
    "CSV_HEADER",
    "DenoiseParams",
    "DenoiseResult",
    "EdgeSet",
    "FilterParams",
    "FilterResult",
    "GraphFilter",
    "MergeStepReport",
    "RegionEdge",
    "RegionGraph",
    "RegionNode",
    "TVDenoiser",
    "UnionFind",
    "adjusted_distance",
    "color_distance",
    "denoise",
    "denoise_objective",
    "edge_table",
    "extract_edges",
    "filter_image",
    "from_uint8",
    "graph_to_image",
    "image_to_graph",
    "merge_step",
    "merge_threshold",
    "node_count",
    "read_graph_csv",
    "read_image",
    "read_label_matrix",
    "resolution_schedule",
    "select_candidates",
    "size_adjustment",
    "surface_loss",
    "to_uint8",
    "tv_loss",
    "validate_graph",
    "write_graph_csv",
    "write_graph_dot",
    "write_image",
    "write_label_matrix",
]

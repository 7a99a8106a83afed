"""Hopsets and spanners from a unified level schedule, with verifiers and lower-bound instances."""

from .core import LevelAssignment, PivotTable, compute_pivots, sample_levels, score
from .graph import AugmentedGraph, Graph, hop_bounded_distance, random_graph, read_edge_list
from .hopset import HopsetEdgeSet, build_hopset
from .schedule import LevelFunction, ParamSchedule, compute_lambdas, compute_radii
from .spanner import SpannerEdgeSet, build_spanner_half, build_spanner_truncated
from .verify import measure_min_hopbound, trace_jump_path, verify_hopset, verify_spanner

__all__ = [
    "AugmentedGraph", "Graph", "HopsetEdgeSet", "LevelAssignment", "LevelFunction", "ParamSchedule",
    "PivotTable", "SpannerEdgeSet", "build_hopset", "build_spanner_half", "build_spanner_truncated",
    "compute_lambdas", "compute_pivots", "compute_radii", "hop_bounded_distance", "measure_min_hopbound",
    "random_graph", "read_edge_list", "sample_levels", "score", "trace_jump_path", "verify_hopset", "verify_spanner",
]

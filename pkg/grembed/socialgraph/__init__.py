from .graph import DEFAULT_EPSILON, build_weighted_graph, graph_stats, load_edge_list, save_edge_list
from .similarity import similarity_weight
from .types import GraphStats, WeightedGraph


__all__ = [
    "DEFAULT_EPSILON",
    "GraphStats",
    "WeightedGraph",
    "build_weighted_graph",
    "graph_stats",
    "load_edge_list",
    "save_edge_list",
    "similarity_weight",
]

"""Exact and sampled laws of minimum spanning trees under random edge weights."""

from .graph_core import (
    Graph,
    GraphError,
    ResourceCapError,
    complete_graph,
    cycle_graph,
    square_with_diagonal,
    theta_graph,
)
from .mst_exact import mst_distribution, mst_prob, uniform_distribution

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphError",
    "ResourceCapError",
    "complete_graph",
    "cycle_graph",
    "square_with_diagonal",
    "theta_graph",
    "mst_distribution",
    "mst_prob",
    "uniform_distribution",
]

"""Hybrid quantum walks on labeled graphs.

A walk step applies a unitary coin on the edge-label space and then evolves
under exp(-iHt) with H = sum_c |c><c| (x) S_c built from per-label subgraph
adjacencies. On top of the engine sit a perfect-state-transfer protocol for
properly edge-colored connected graphs and an adjacency-product algorithm
(with triangle counting) for regular graphs.
"""

from . import graphs, linalg, matmul, pst, walk
from .graphs import LabeledGraph, Edge, build, load_json, save_json
from .walk import HybridWalk, Trajectory

__version__ = "0.1.0"

__all__ = [
    "Edge",
    "HybridWalk",
    "LabeledGraph",
    "Trajectory",
    "build",
    "graphs",
    "linalg",
    "load_json",
    "matmul",
    "pst",
    "save_json",
    "walk",
    "__version__",
]

"""Pfaffian graph recognition with certificates."""
from .engine import Certificate, Orientation, decide, find_pfaffian_orientation
from .graph import Circuit, Graph, Path, parse_edge_list, read_graph
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Certificate",
    "Circuit",
    "Graph",
    "Orientation",
    "Path",
    "decide",
    "find_pfaffian_orientation",
    "parse_edge_list",
    "read_graph",
]

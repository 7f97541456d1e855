"""
Core module for brlab.

This module contains the primitives every layer builds on:
- graph: bitmask bipartite graphs and small generators
- coloring: edge colorings of K_{N,N}
- patterns: biclique, even-cycle and subgraph-copy search
- certificate: re-verifiable JSON witnesses
"""

__version__ = "0.1.0"

from .certificate import Certificate, decode_certificate, encode_certificate
from .coloring import EdgeColoring, decode_coloring, encode_coloring
from .graph import BipartiteGraph, complete_bipartite, decode, encode
from .patterns import PatternWitness, find_biclique, find_even_cycle, find_subgraph_copy

__all__ = [
    "__version__",
    "BipartiteGraph",
    "complete_bipartite",
    "encode",
    "decode",
    "EdgeColoring",
    "encode_coloring",
    "decode_coloring",
    "Certificate",
    "encode_certificate",
    "decode_certificate",
    "PatternWitness",
    "find_biclique",
    "find_even_cycle",
    "find_subgraph_copy",
]

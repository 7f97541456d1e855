"""
Bounds layer for brlab.

This package contains the algorithmic components:
- zarankiewicz: exact extremal numbers and the closed-form upper bounds
- ramsey: exact bipartite Ramsey search and the double-counting certifier
- lll: Local Lemma parameter algebra, condition checker and resampler
- embedder: greedy blue embedding of sparse targets with stuck diagnostics
"""

__all__ = []

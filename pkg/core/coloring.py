"""
Edge colorings of the complete bipartite host K_{N,N}.

Convention: color 0 is red, color ``num_colors - 1`` is blue (the
distinguished biclique color in multicolor searches).

Serialization:
    {"n": N, "colors": K, "matrix": [[c_00, ..., c_0(N-1)], ...]}   row = left vertex
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from .codec import canonical_json, parse_json_object, require_count, require_list
from .errors import GraphFormatError
from .graph import BipartiteGraph

log = logging.getLogger(__name__)

RED = 0


class EdgeColoring:
    """
    Total map from the N² edges of K_{N,N} to colors [0, num_colors).

    The matrix is copied and frozen on construction.
    """

    __slots__ = ("_n", "_k", "_matrix")

    def __init__(self, n_host: int, num_colors: int, matrix):
        if n_host < 0:
            raise ValueError(f"host side must be non-negative, got {n_host}")
        if num_colors < 2:
            raise ValueError(f"need at least two colors, got {num_colors}")
        if num_colors > 256:
            raise ValueError(f"at most 256 colors fit the uint8 matrix, got {num_colors}")
        arr = np.array(matrix, dtype=np.int64).reshape(n_host, n_host) if n_host else np.zeros((0, 0), dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= num_colors):
            raise ValueError(f"color indices must lie in [0, {num_colors})")
        frozen = arr.astype(np.uint8)
        frozen.setflags(write=False)
        self._n = n_host
        self._k = num_colors
        self._matrix = frozen

    # ----------------------
    # Constructors
    # ----------------------
    @classmethod
    def from_matrix(cls, matrix, num_colors: int = 2) -> "EdgeColoring":
        arr = np.asarray(matrix)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"coloring matrix must be square, got shape {arr.shape}")
        return cls(arr.shape[0], num_colors, arr)

    @classmethod
    def constant(cls, n_host: int, num_colors: int, color: int) -> "EdgeColoring":
        if not 0 <= color < num_colors:
            raise ValueError(f"color {color} outside [0, {num_colors})")
        return cls(n_host, num_colors, np.full((n_host, n_host), color, dtype=np.int64))

    @classmethod
    def from_red_graph(cls, red: BipartiteGraph) -> "EdgeColoring":
        """Two-coloring whose red class is ``red`` (square host required) and everything else blue."""
        if red.left_size != red.right_size:
            raise ValueError("red graph must span a square host")
        n = red.left_size
        mat = np.ones((n, n), dtype=np.int64)
        for u, v in red.edges():
            mat[u, v] = RED
        return cls(n, 2, mat)

    @classmethod
    def random_matching_coloring(cls, n_host: int, rng: np.random.Generator) -> "EdgeColoring":
        """Red class = a uniformly random perfect matching; all other edges blue."""
        perm = rng.permutation(n_host)
        mat = np.ones((n_host, n_host), dtype=np.int64)
        mat[np.arange(n_host), perm] = RED
        return cls(n_host, 2, mat)

    # ----------------------
    # Accessors
    # ----------------------
    @property
    def n_host(self) -> int:
        return self._n

    @property
    def num_colors(self) -> int:
        return self._k

    @property
    def blue(self) -> int:
        return self._k - 1

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def color(self, u: int, v: int) -> int:
        return int(self._matrix[u, v])

    def color_class(self, i: int) -> BipartiteGraph:
        """Spanning subgraph of K_{N,N} formed by the edges of color ``i``."""
        if not 0 <= i < self._k:
            raise IndexError(f"color index {i} outside [0, {self._k})")
        rows = []
        for u in range(self._n):
            row = 0
            for v in np.flatnonzero(self._matrix[u] == i):
                row |= 1 << int(v)
            rows.append(row)
        return BipartiteGraph(self._n, self._n, rows)

    def red_degrees(self) -> Tuple[np.ndarray, np.ndarray]:
        """(left red degrees, right red degrees) as integer arrays."""
        red = self._matrix == RED
        return red.sum(axis=1).astype(np.int64), red.sum(axis=0).astype(np.int64)

    def restrict(self, n_sub: int) -> "EdgeColoring":
        """Coloring of the K_{n_sub,n_sub} sub-board on the first ``n_sub`` vertices of each side."""
        if not 0 <= n_sub <= self._n:
            raise ValueError(f"sub-board side {n_sub} outside [0, {self._n}]")
        return EdgeColoring(n_sub, self._k, self._matrix[:n_sub, :n_sub])

    def rows_as_lists(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self._matrix]

    # ----------------------
    # Dunder
    # ----------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeColoring):
            return NotImplemented
        return self._n == other._n and self._k == other._k and np.array_equal(self._matrix, other._matrix)

    def __hash__(self) -> int:
        return hash((self._n, self._k, self._matrix.tobytes()))

    def __repr__(self) -> str:
        return f"EdgeColoring(n={self._n}, colors={self._k})"

    # ----------------------
    # JSON form
    # ----------------------
    def to_json(self) -> dict:
        return {"n": self._n, "colors": self._k, "matrix": self.rows_as_lists()}

    @classmethod
    def from_json(cls, obj: dict) -> "EdgeColoring":
        if not isinstance(obj, dict):
            raise GraphFormatError("coloring", "expected a JSON object")
        n = require_count(obj, "n")
        k = require_count(obj, "colors")
        if k < 2:
            raise GraphFormatError("colors", f"need at least two colors, got {k}")
        rows = require_list(obj, "matrix")
        if len(rows) != n:
            raise GraphFormatError("matrix", f"expected {n} rows, got {len(rows)}")
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != n:
                raise GraphFormatError(f"matrix[{i}]", f"expected a row of {n} colors")
            for j, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < k:
                    raise GraphFormatError(f"matrix[{i}][{j}]", f"expected a color in [0, {k}), got {x!r}")
        return cls(n, k, rows if n else np.zeros((0, 0), dtype=np.int64))


def encode_coloring(c: EdgeColoring) -> str:
    return canonical_json(c.to_json())


def decode_coloring(text: str) -> EdgeColoring:
    return EdgeColoring.from_json(parse_json_object(text, "coloring"))


def coloring_from_rows(rows: Sequence[Sequence[int]], num_colors: int = 2) -> EdgeColoring:
    return EdgeColoring(len(rows), num_colors, [list(r) for r in rows] if rows else np.zeros((0, 0), dtype=np.int64))

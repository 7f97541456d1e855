"""
Bipartite graph primitive.

Vertices are 0-indexed per side; an edge is an ordered pair (left, right).
Adjacency is stored as one Python-int bitmask per left vertex (bit v set
<=> edge (u, v)), so neighbourhood intersections are single AND operations
and degrees are popcounts.

Serialization:
    {"left": L, "right": R, "edges": [[u, v], ...]}   edges sorted (u, v)-lexicographically
"""

import logging
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .codec import canonical_json, parse_json_object, require_count, require_list
from .errors import GraphFormatError

log = logging.getLogger(__name__)

LEFT = 0
RIGHT = 1

Vertex = Tuple[int, int]  # (side, index)


# =======================
# Bit helpers
# =======================
def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bits(mask: int, k: int) -> List[int]:
    """The ``k`` smallest set positions of ``mask`` (fewer if it has fewer bits)."""
    out = []
    for b in iter_bits(mask):
        if len(out) == k:
            break
        out.append(b)
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def columns_from_rows(rows: Sequence[int], right_size: int) -> Tuple[int, ...]:
    cols = [0] * right_size
    for u, row in enumerate(rows):
        for v in iter_bits(row):
            cols[v] |= 1 << u
    return tuple(cols)


# =======================
# Graph
# =======================
class BipartiteGraph:
    """
    Immutable bipartite graph with explicit left/right parts.

    :param left_size: number of left vertices L >= 0
    :param right_size: number of right vertices R >= 0
    :param rows: one bitmask per left vertex; bit v marks edge (u, v)
    """

    __slots__ = ("_left", "_right", "_rows", "_columns")

    def __init__(self, left_size: int, right_size: int, rows: Optional[Sequence[int]] = None):
        if left_size < 0 or right_size < 0:
            raise ValueError(f"part sizes must be non-negative, got ({left_size}, {right_size})")
        if rows is None:
            rows = (0,) * left_size
        rows = tuple(int(r) for r in rows)
        if len(rows) != left_size:
            raise ValueError(f"expected {left_size} rows, got {len(rows)}")
        limit = 1 << right_size
        for u, row in enumerate(rows):
            if row < 0 or row >= limit:
                raise ValueError(f"row {u} has a neighbour outside [0, {right_size})")
        self._left = left_size
        self._right = right_size
        self._rows = rows
        self._columns = None

    @classmethod
    def from_edges(cls, left_size: int, right_size: int, edges: Iterable[Tuple[int, int]]) -> "BipartiteGraph":
        rows = [0] * left_size
        for u, v in edges:
            if not (0 <= u < left_size and 0 <= v < right_size):
                raise ValueError(f"edge ({u}, {v}) outside {left_size}x{right_size}")
            rows[u] |= 1 << v
        return cls(left_size, right_size, rows)

    # ----------------------
    # Accessors
    # ----------------------
    @property
    def left_size(self) -> int:
        return self._left

    @property
    def right_size(self) -> int:
        return self._right

    @property
    def rows(self) -> Tuple[int, ...]:
        return self._rows

    @property
    def columns(self) -> Tuple[int, ...]:
        """Bitmask of left neighbours for each right vertex (computed once)."""
        if self._columns is None:
            self._columns = columns_from_rows(self._rows, self._right)
        return self._columns

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self._rows)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._rows[u] >> v) & 1)

    def neighbors(self, side: int, index: int) -> List[int]:
        mask = self._rows[index] if side == LEFT else self.columns[index]
        return list(iter_bits(mask))

    def degree(self, side: int, index: int) -> int:
        mask = self._rows[index] if side == LEFT else self.columns[index]
        return mask.bit_count()

    def left_degrees(self) -> List[int]:
        return [row.bit_count() for row in self._rows]

    def right_degrees(self) -> List[int]:
        return [col.bit_count() for col in self.columns]

    def edges(self) -> List[Tuple[int, int]]:
        """All edges in canonical (u, v)-lexicographic order."""
        return [(u, v) for u, row in enumerate(self._rows) for v in iter_bits(row)]

    def vertices(self) -> List[Vertex]:
        return [(LEFT, u) for u in range(self._left)] + [(RIGHT, v) for v in range(self._right)]

    # ----------------------
    # Derived graphs
    # ----------------------
    def transpose(self) -> "BipartiteGraph":
        """Swap the sides: edge (u, v) becomes (v, u)."""
        return BipartiteGraph(self._right, self._left, self.columns)

    def with_edge(self, u: int, v: int) -> "BipartiteGraph":
        rows = list(self._rows)
        rows[u] |= 1 << v
        return BipartiteGraph(self._left, self._right, rows)

    def induced(self, left_subset: Sequence[int], right_subset: Sequence[int]) -> "BipartiteGraph":
        """Subgraph on the given vertices, relabelled in the order the subsets are listed."""
        rows = []
        for u in left_subset:
            row = self._rows[u]
            new = 0
            for j, v in enumerate(right_subset):
                if (row >> v) & 1:
                    new |= 1 << j
            rows.append(new)
        return BipartiteGraph(len(left_subset), len(right_subset), rows)

    def isolated_vertices(self) -> List[Vertex]:
        iso = [(LEFT, u) for u, row in enumerate(self._rows) if row == 0]
        iso += [(RIGHT, v) for v, col in enumerate(self.columns) if col == 0]
        return iso

    def without_isolated(self) -> Tuple["BipartiteGraph", List[int], List[int]]:
        """
        Drop isolated vertices.

        Returns (graph, kept_left, kept_right) where kept_* list the original
        indices of the surviving vertices in order.
        """
        kept_left = [u for u, row in enumerate(self._rows) if row]
        kept_right = [v for v, col in enumerate(self.columns) if col]
        return self.induced(kept_left, kept_right), kept_left, kept_right

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(((LEFT, u) for u in range(self._left)), bipartite=LEFT)
        G.add_nodes_from(((RIGHT, v) for v in range(self._right)), bipartite=RIGHT)
        G.add_edges_from(((LEFT, u), (RIGHT, v)) for u, v in self.edges())
        return G

    def is_connected(self) -> bool:
        if self._left + self._right == 0:
            return False
        return nx.is_connected(self.to_networkx())

    # ----------------------
    # Dunder
    # ----------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self._left, self._right, self._rows) == (other._left, other._right, other._rows)

    def __hash__(self) -> int:
        return hash((self._left, self._right, self._rows))

    def __repr__(self) -> str:
        return f"BipartiteGraph(left={self._left}, right={self._right}, edges={self.edge_count})"

    # ----------------------
    # JSON form
    # ----------------------
    def to_json(self) -> dict:
        return {"left": self._left, "right": self._right, "edges": [[u, v] for u, v in self.edges()]}

    @classmethod
    def from_json(cls, obj: dict) -> "BipartiteGraph":
        if not isinstance(obj, dict):
            raise GraphFormatError("graph", "expected a JSON object")
        left = require_count(obj, "left")
        right = require_count(obj, "right")
        edges = require_list(obj, "edges")
        rows = [0] * left
        for i, e in enumerate(edges):
            field = f"edges[{i}]"
            if not isinstance(e, list) or len(e) != 2:
                raise GraphFormatError(field, f"expected a [u, v] pair, got {e!r}")
            u, v = e
            if isinstance(u, bool) or isinstance(v, bool) or not isinstance(u, int) or not isinstance(v, int):
                raise GraphFormatError(field, f"vertex indices must be integers, got {e!r}")
            if not 0 <= u < left:
                raise GraphFormatError(field, f"left vertex {u} outside [0, {left})")
            if not 0 <= v < right:
                raise GraphFormatError(field, f"right vertex {v} outside [0, {right})")
            rows[u] |= 1 << v
        return cls(left, right, rows)


def encode(g: BipartiteGraph) -> str:
    """Canonical text of ``g``; ``decode(encode(g)) == g``."""
    return canonical_json(g.to_json())


def decode(text: str) -> BipartiteGraph:
    return BipartiteGraph.from_json(parse_json_object(text, "graph"))


# =======================
# Constructors
# =======================
def complete_bipartite(a: int, b: int) -> BipartiteGraph:
    if a < 0 or b < 0:
        raise ValueError(f"part sizes must be non-negative, got ({a}, {b})")
    full = (1 << b) - 1
    return BipartiteGraph(a, b, [full] * a)


def empty_graph(a: int, b: int) -> BipartiteGraph:
    return BipartiteGraph(a, b)


def perfect_matching(n: int) -> BipartiteGraph:
    return BipartiteGraph(n, n, [1 << i for i in range(n)])


def path_graph(num_edges: int) -> BipartiteGraph:
    """Path with ``num_edges`` edges; vertex i of the path sits on side i % 2 at index i // 2."""
    if num_edges < 1:
        raise ValueError("a path needs at least one edge")
    verts = num_edges + 1
    left = (verts + 1) // 2
    right = verts // 2
    edges = []
    for i in range(num_edges):
        a, b = i, i + 1
        if a % 2 == 0:
            edges.append((a // 2, b // 2))
        else:
            edges.append((b // 2, a // 2))
    return BipartiteGraph.from_edges(left, right, edges)


def even_cycle_graph(length: int) -> BipartiteGraph:
    """The cycle C_length (length even, >= 4) as u0 v0 u1 v1 ... u_{t-1} v_{t-1} u0."""
    if length < 4 or length % 2:
        raise ValueError(f"cycle length must be even and >= 4, got {length}")
    t = length // 2
    edges = [(i, i) for i in range(t)] + [((i + 1) % t, i) for i in range(t)]
    return BipartiteGraph.from_edges(t, t, edges)


def random_tree(m: int, rng: np.random.Generator) -> BipartiteGraph:
    """
    Uniform random labelled tree with ``m`` edges (Prüfer sequence), split into
    its bipartition. Colour-0 vertices go left, ordered by label.
    """
    if m < 1:
        raise ValueError("a tree target needs at least one edge")
    n = m + 1
    sequence = [int(x) for x in rng.integers(0, n, size=n - 2)]
    T = nx.from_prufer_sequence(sequence)
    colour = nx.bipartite.color(T)
    left = sorted(v for v in T.nodes if colour[v] == 0)
    right = sorted(v for v in T.nodes if colour[v] == 1)
    li = {v: i for i, v in enumerate(left)}
    ri = {v: i for i, v in enumerate(right)}
    edges = []
    for a, b in T.edges:
        if a in li:
            edges.append((li[a], ri[b]))
        else:
            edges.append((li[b], ri[a]))
    return BipartiteGraph.from_edges(len(left), len(right), edges)

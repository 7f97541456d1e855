"""
Pattern search on bipartite hosts: K_{s,s}, exact-length even cycles, and
arbitrary fixed bipartite patterns.

All searches run on bitmask rows/columns and visit candidates in ascending
vertex order, so the first witness found is the lexicographically least one
under that order and results never depend on how callers partition work.

Each search has a mask-level core (``_Host``) used by the exact searches for
incremental checks, and a ``BipartiteGraph`` wrapper returning a
``PatternWitness``.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .errors import GraphFormatError, ResourceLimitError
from .graph import LEFT, RIGHT, BipartiteGraph, iter_bits, lowest_bits

log = logging.getLogger(__name__)

BICLIQUE = "biclique"
CYCLE = "cycle"
GENERIC = "generic"


# =======================
# Mask-level host view
# =======================
class _Host(NamedTuple):
    rows: Sequence[int]
    cols: Sequence[int]
    left: int
    right: int

    @classmethod
    def of(cls, g: BipartiteGraph) -> "_Host":
        return cls(g.rows, g.columns, g.left_size, g.right_size)

    def flipped(self) -> "_Host":
        return _Host(self.cols, self.rows, self.right, self.left)


class _Budget:
    """Counts search nodes; raises once ``limit`` is exceeded."""

    __slots__ = ("limit", "nodes", "flag")

    def __init__(self, limit: Optional[int] = None, flag: str = "--node-limit"):
        self.limit = limit
        self.nodes = 0
        self.flag = flag

    def tick(self):
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise ResourceLimitError(self.flag, f"pattern search exceeded {self.limit} nodes")


# =======================
# Witness
# =======================
@dataclass
class PatternWitness:
    """
    Explicit copy of a pattern inside a host.

    biclique: ``left``/``right`` are the two vertex sets (sorted).
    cycle:    ``cycle`` lists (side, index) pairs v0..v_{2t-1}, starting on the left.
    generic:  ``left_map[i]`` / ``right_map[j]`` give the host index of pattern
              vertex i / j (``None`` for dropped isolated vertices); with
              ``flipped`` the pattern's left side lands on the host's right side.
    """

    kind: str
    left: List[int] = field(default_factory=list)
    right: List[int] = field(default_factory=list)
    cycle: List[Tuple[int, int]] = field(default_factory=list)
    left_map: List[Optional[int]] = field(default_factory=list)
    right_map: List[Optional[int]] = field(default_factory=list)
    flipped: bool = False
    pattern_edges: List[Tuple[int, int]] = field(default_factory=list)

    def host_edges(self) -> List[Tuple[int, int]]:
        """Host edges (left, right) the witness claims to use."""
        if self.kind == BICLIQUE:
            return [(a, b) for a in self.left for b in self.right]
        if self.kind == CYCLE:
            out = []
            k = len(self.cycle)
            for i in range(k):
                (s1, x1), (s2, x2) = self.cycle[i], self.cycle[(i + 1) % k]
                out.append((x1, x2) if s1 == LEFT else (x2, x1))
            return out
        out = []
        for a, b in self.pattern_edges:
            ha, hb = self.left_map[a], self.right_map[b]
            out.append((hb, ha) if self.flipped else (ha, hb))
        return out

    def verify(self, host: BipartiteGraph) -> bool:
        """Re-check the witness against ``host`` using only its edge set."""
        try:
            if self.kind == BICLIQUE:
                if len(self.left) != len(self.right) or not self.left:
                    return False
                if len(set(self.left)) != len(self.left) or len(set(self.right)) != len(self.right):
                    return False
                if max(self.left) >= host.left_size or max(self.right) >= host.right_size:
                    return False
            elif self.kind == CYCLE:
                k = len(self.cycle)
                if k < 4 or k % 2 or len(set(self.cycle)) != k:
                    return False
                for i, (side, x) in enumerate(self.cycle):
                    if side != (LEFT if i % 2 == 0 else RIGHT):
                        return False
                    if x < 0 or x >= (host.left_size if side == LEFT else host.right_size):
                        return False
            elif self.kind == GENERIC:
                lm = [x for x in self.left_map if x is not None]
                rm = [x for x in self.right_map if x is not None]
                if len(set(lm)) != len(lm) or len(set(rm)) != len(rm):
                    return False
                for a, b in self.pattern_edges:
                    if self.left_map[a] is None or self.right_map[b] is None:
                        return False
            else:
                return False
            for u, v in self.host_edges():
                if u < 0 or v < 0 or u >= host.left_size or v >= host.right_size or not host.has_edge(u, v):
                    return False
        except (IndexError, TypeError):
            return False
        return True

    # ----------------------
    # JSON form
    # ----------------------
    def to_json(self) -> dict:
        if self.kind == BICLIQUE:
            return {"kind": BICLIQUE, "left": list(self.left), "right": list(self.right)}
        if self.kind == CYCLE:
            return {"kind": CYCLE, "vertices": [[s, x] for s, x in self.cycle]}
        return {
            "kind": GENERIC,
            "left_map": list(self.left_map),
            "right_map": list(self.right_map),
            "flipped": self.flipped,
            "pattern_edges": [[a, b] for a, b in self.pattern_edges],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PatternWitness":
        if not isinstance(obj, dict):
            raise GraphFormatError("witness", "expected a JSON object")
        kind = obj.get("kind")
        try:
            if kind == BICLIQUE:
                return cls(BICLIQUE, left=[int(x) for x in obj["left"]], right=[int(x) for x in obj["right"]])
            if kind == CYCLE:
                return cls(CYCLE, cycle=[(int(s), int(x)) for s, x in obj["vertices"]])
            if kind == GENERIC:
                return cls(
                    GENERIC,
                    left_map=[None if x is None else int(x) for x in obj["left_map"]],
                    right_map=[None if x is None else int(x) for x in obj["right_map"]],
                    flipped=bool(obj["flipped"]),
                    pattern_edges=[(int(a), int(b)) for a, b in obj["pattern_edges"]],
                )
        except KeyError as e:
            raise GraphFormatError(f"witness.{e.args[0]}", "missing")
        except (TypeError, ValueError) as e:
            raise GraphFormatError("witness", f"malformed ({e})")
        raise GraphFormatError("witness.kind", f"unknown witness kind {kind!r}")


# =======================
# Biclique
# =======================
def _least_biclique(h: _Host, s: int, budget: _Budget) -> Optional[Tuple[List[int], List[int]]]:
    eligible = [u for u in range(h.left) if h.rows[u].bit_count() >= s]
    if len(eligible) < s or s > h.right:
        return None
    chosen: List[int] = []

    def dfs(start: int, inter: int) -> Optional[int]:
        if len(chosen) == s:
            return inter
        need = s - len(chosen)
        for idx in range(start, len(eligible) - need + 1):
            u = eligible[idx]
            budget.tick()
            narrowed = inter & h.rows[u]
            if narrowed.bit_count() < s:
                continue
            chosen.append(u)
            found = dfs(idx + 1, narrowed)
            if found is not None:
                return found
            chosen.pop()
        return None

    inter = dfs(0, (1 << h.right) - 1)
    if inter is None:
        return None
    return list(chosen), lowest_bits(inter, s)


def _biclique_through(h: _Host, s: int, u: int, v: int, budget: _Budget) -> Optional[Tuple[List[int], List[int]]]:
    if not (h.rows[u] >> v) & 1:
        return None
    if h.rows[u].bit_count() < s or h.cols[v].bit_count() < s:
        return None
    others = [w for w in iter_bits(h.cols[v] & ~(1 << u)) if h.rows[w].bit_count() >= s]
    chosen: List[int] = []

    def dfs(start: int, inter: int) -> Optional[int]:
        if len(chosen) == s - 1:
            return inter
        need = s - 1 - len(chosen)
        for idx in range(start, len(others) - need + 1):
            w = others[idx]
            budget.tick()
            narrowed = inter & h.rows[w]
            if narrowed.bit_count() < s:
                continue
            chosen.append(w)
            found = dfs(idx + 1, narrowed)
            if found is not None:
                return found
            chosen.pop()
        return None

    inter = dfs(0, h.rows[u])
    if inter is None:
        return None
    right = sorted([v] + lowest_bits(inter & ~(1 << v), s - 1))
    return sorted(chosen + [u]), right


def find_biclique(g: BipartiteGraph, s: int, node_limit: Optional[int] = None) -> Optional[PatternWitness]:
    """
    Lexicographically least K_{s,s} in ``g``: least left set first, then the
    least right set inside its common neighbourhood.

    :param node_limit: optional search-node budget; exceeding it raises ResourceLimitError
    """
    if s < 1:
        raise ValueError(f"biclique side must be >= 1, got {s}")
    found = _least_biclique(_Host.of(g), s, _Budget(node_limit))
    if found is None:
        return None
    return PatternWitness(BICLIQUE, left=found[0], right=found[1])


def biclique_through_edge(g: BipartiteGraph, s: int, u: int, v: int) -> Optional[PatternWitness]:
    """Least K_{s,s} of ``g`` that uses the edge (u, v)."""
    if s < 1:
        raise ValueError(f"biclique side must be >= 1, got {s}")
    found = _biclique_through(_Host.of(g), s, u, v, _Budget())
    if found is None:
        return None
    return PatternWitness(BICLIQUE, left=found[0], right=found[1])


# =======================
# Even cycles
# =======================
def _cycle_search(
    h: _Host, t: int, u0: int, first_right: int, allowed_left: int, ordered_close: bool, budget: _Budget
) -> Optional[List[Tuple[int, int]]]:
    """
    DFS for u0 v0 u1 v1 ... u_{t-1} v_{t-1} (back to u0).

    v0 ranges over ``first_right``; u1.. over ``allowed_left``. With
    ``ordered_close`` the closing right vertex must exceed v0, so each cycle
    through u0 is met in one direction only.
    """
    lefts = [u0]
    rights: List[int] = []
    used_r = 0
    used_l = 1 << u0

    def step_left(a: int, depth: int) -> bool:
        nonlocal used_r, used_l
        if depth == t:
            close = h.rows[a] & h.rows[u0] & ~used_r
            if ordered_close:
                close &= ~((1 << (rights[0] + 1)) - 1)
            if close:
                rights.append((close & -close).bit_length() - 1)
                return True
            return False
        options = h.rows[a] & ~used_r
        if depth == 1:
            options &= first_right
        for v in iter_bits(options):
            budget.tick()
            used_r |= 1 << v
            rights.append(v)
            for b in iter_bits(h.cols[v] & allowed_left & ~used_l):
                used_l |= 1 << b
                lefts.append(b)
                if step_left(b, depth + 1):
                    return True
                lefts.pop()
                used_l &= ~(1 << b)
            rights.pop()
            used_r &= ~(1 << v)
        return False

    if not step_left(u0, 1):
        return None
    out: List[Tuple[int, int]] = []
    for a, b in zip(lefts, rights):
        out.append((LEFT, a))
        out.append((RIGHT, b))
    return out


def _check_cycle_length(two_t: int) -> int:
    if two_t < 4 or two_t % 2:
        raise ValueError(f"cycle length must be even and >= 4, got {two_t}")
    return two_t // 2


def _least_cycle(h: _Host, t: int, budget: _Budget) -> Optional[List[Tuple[int, int]]]:
    if t > h.left or t > h.right:
        return None
    all_left = (1 << h.left) - 1
    all_right = (1 << h.right) - 1
    for u0 in range(h.left):
        if h.rows[u0].bit_count() < 2:
            continue
        above = all_left & ~((1 << (u0 + 1)) - 1)
        found = _cycle_search(h, t, u0, all_right, above, True, budget)
        if found is not None:
            return found
    return None


def _cycle_through(h: _Host, t: int, u: int, v: int, budget: _Budget) -> Optional[List[Tuple[int, int]]]:
    if t > h.left or t > h.right or not (h.rows[u] >> v) & 1:
        return None
    all_left = (1 << h.left) - 1
    return _cycle_search(h, t, u, 1 << v, all_left & ~(1 << u), False, budget)


def find_even_cycle(g: BipartiteGraph, two_t: int, node_limit: Optional[int] = None) -> Optional[PatternWitness]:
    """
    A cycle with exactly ``two_t`` vertices, or None.

    The witness starts at its least left vertex; the search order is
    ascending in every coordinate, so the result is deterministic.
    """
    t = _check_cycle_length(two_t)
    found = _least_cycle(_Host.of(g), t, _Budget(node_limit))
    if found is None:
        return None
    return PatternWitness(CYCLE, cycle=found)


def cycle_through_edge(g: BipartiteGraph, two_t: int, u: int, v: int) -> Optional[PatternWitness]:
    t = _check_cycle_length(two_t)
    found = _cycle_through(_Host.of(g), t, u, v, _Budget())
    if found is None:
        return None
    return PatternWitness(CYCLE, cycle=found)


# =======================
# Generic bipartite patterns
# =======================
class _PlacementPlan:
    """
    Static placement order for a pattern without isolated vertices.

    Vertices are placed most-constrained first: the next vertex has the most
    already-placed neighbours, ties broken by larger degree, then by
    (side, index).
    """

    def __init__(self, pattern: BipartiteGraph, pinned: Sequence[Tuple[int, int]] = ()):
        self.pattern = pattern
        verts = pattern.vertices()
        degree = {x: pattern.degree(*x) for x in verts}
        order: List[Tuple[int, int]] = list(pinned)
        placed = set(order)
        while len(order) < len(verts):
            best = max(
                (x for x in verts if x not in placed),
                key=lambda x: (
                    sum(1 for y in self._nbrs(x) if y in placed),
                    degree[x],
                    -x[0],
                    -x[1],
                ),
            )
            order.append(best)
            placed.add(best)
        self.order = order
        self.degree = degree
        position = {x: i for i, x in enumerate(order)}
        self.back = [[y for y in self._nbrs(x) if position[y] < i] for i, x in enumerate(order)]

    def _nbrs(self, x: Tuple[int, int]) -> List[Tuple[int, int]]:
        side, i = x
        other = RIGHT if side == LEFT else LEFT
        return [(other, j) for j in self.pattern.neighbors(side, i)]


def _match(h: _Host, plan: _PlacementPlan, pinned: Dict[Tuple[int, int], int], budget: _Budget) -> Optional[Dict[Tuple[int, int], int]]:
    """Injective edge-preserving placement of ``plan.pattern`` into ``h`` honouring ``pinned``."""
    host_deg = (
        [r.bit_count() for r in h.rows],
        [c.bit_count() for c in h.cols],
    )
    full = ((1 << h.left) - 1, (1 << h.right) - 1)
    adj = (h.rows, h.cols)
    image: Dict[Tuple[int, int], int] = {}
    used = [0, 0]
    order = plan.order

    def candidates(i: int) -> int:
        side = order[i][0]
        mask = full[side] & ~used[side]
        for y in plan.back[i]:
            mask &= adj[y[0]][image[y]]
        return mask

    def place(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        side = x[0]
        if x in pinned:
            opts = candidates(i) & (1 << pinned[x])
        else:
            opts = candidates(i)
        need = plan.degree[x]
        for hv in iter_bits(opts):
            if host_deg[side][hv] < need:
                continue
            budget.tick()
            image[x] = hv
            used[side] |= 1 << hv
            if place(i + 1):
                return True
            used[side] &= ~(1 << hv)
            del image[x]
        return False

    return dict(image) if place(0) else None


def _strip_isolated(pattern: BipartiteGraph) -> Tuple[BipartiteGraph, List[int], List[int]]:
    iso = pattern.isolated_vertices()
    if iso:
        log.warning(f"[PATTERN] dropping {len(iso)} isolated pattern vertices: {iso}")
    return pattern.without_isolated()


def _lift(
    pattern: BipartiteGraph, kept_left: List[int], kept_right: List[int], image: Dict[Tuple[int, int], int], flipped: bool
) -> PatternWitness:
    left_map: List[Optional[int]] = [None] * pattern.left_size
    right_map: List[Optional[int]] = [None] * pattern.right_size
    for (side, i), hv in image.items():
        if side == LEFT:
            left_map[kept_left[i]] = hv
        else:
            right_map[kept_right[i]] = hv
    return PatternWitness(
        GENERIC, left_map=left_map, right_map=right_map, flipped=flipped, pattern_edges=pattern.edges()
    )


def _copy_in(h: _Host, pattern: BipartiteGraph, node_limit: Optional[int]) -> Optional[Tuple[Dict, bool, List[int], List[int]]]:
    core, kept_left, kept_right = _strip_isolated(pattern)
    budget = _Budget(node_limit)
    if core.edge_count == 0:
        return {}, False, kept_left, kept_right
    plan = _PlacementPlan(core)
    for flipped, view in ((False, h), (True, h.flipped())):
        if core.left_size > view.left or core.right_size > view.right:
            continue
        image = _match(view, plan, {}, budget)
        if image is not None:
            return image, flipped, kept_left, kept_right
    return None


def find_subgraph_copy(host: BipartiteGraph, pattern: BipartiteGraph, node_limit: Optional[int] = None) -> Optional[PatternWitness]:
    """
    A copy of ``pattern`` in ``host`` (not necessarily induced).

    Both orientations are tried, pattern-left on host-left first. Isolated
    pattern vertices are dropped with a warning and mapped to ``None``.
    """
    found = _copy_in(_Host.of(host), pattern, node_limit)
    if found is None:
        return None
    image, flipped, kept_left, kept_right = found
    return _lift(pattern, kept_left, kept_right, image, flipped)


def _anchored_plans(core: BipartiteGraph) -> List[Tuple[int, int, _PlacementPlan]]:
    """One placement plan per pattern edge, with that edge placed first."""
    return [(a, b, _PlacementPlan(core, ((LEFT, a), (RIGHT, b)))) for a, b in core.edges()]


def _copy_through(
    h: _Host, plans: List[Tuple[int, int, _PlacementPlan]], u: int, v: int, budget: _Budget
) -> Optional[Tuple[Dict, bool]]:
    if not (h.rows[u] >> v) & 1:
        return None
    for a, b, plan in plans:
        image = _match(h, plan, {(LEFT, a): u, (RIGHT, b): v}, budget)
        if image is not None:
            return image, False
        image = _match(h.flipped(), plan, {(LEFT, a): v, (RIGHT, b): u}, budget)
        if image is not None:
            return image, True
    return None


def copy_through_edge(host: BipartiteGraph, pattern: BipartiteGraph, u: int, v: int) -> Optional[PatternWitness]:
    """A copy of ``pattern`` whose image contains the host edge (u, v)."""
    core, kept_left, kept_right = _strip_isolated(pattern)
    if core.edge_count == 0:
        return None
    found = _copy_through(_Host.of(host), _anchored_plans(core), u, v, _Budget())
    if found is None:
        return None
    image, flipped = found
    return _lift(pattern, kept_left, kept_right, image, flipped)


# =======================
# Forbidden patterns
# =======================
class ForbiddenPattern(ABC):
    """
    One interface over the three pattern families, used by the exact searches
    and the resampler.

    ``hits_edge`` is the mask-level incremental check: does a copy exist
    through the edge (u, v) of the graph given by ``rows``/``cols``?
    """

    @abstractmethod
    def find(self, host: BipartiteGraph) -> Optional[PatternWitness]:
        ...

    @abstractmethod
    def through_edge(self, host: BipartiteGraph, u: int, v: int) -> Optional[PatternWitness]:
        ...

    @abstractmethod
    def hits_edge(self, rows: Sequence[int], cols: Sequence[int], left: int, right: int, u: int, v: int) -> bool:
        ...

    @abstractmethod
    def describe(self) -> str:
        ...

    @abstractmethod
    def to_json(self) -> dict:
        ...

    @property
    @abstractmethod
    def vertex_count(self) -> int:
        ...

    @property
    @abstractmethod
    def edge_count(self) -> int:
        ...

    def cache_key(self) -> str:
        return self.describe()

    def __eq__(self, other) -> bool:
        return isinstance(other, ForbiddenPattern) and self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash(self.describe())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"


class BicliquePattern(ForbiddenPattern):
    def __init__(self, s: int):
        if s < 1:
            raise ValueError(f"biclique side must be >= 1, got {s}")
        self.s = s

    def find(self, host):
        return find_biclique(host, self.s)

    def through_edge(self, host, u, v):
        return biclique_through_edge(host, self.s, u, v)

    def hits_edge(self, rows, cols, left, right, u, v):
        return _biclique_through(_Host(rows, cols, left, right), self.s, u, v, _Budget()) is not None

    def describe(self):
        return f"K{self.s},{self.s}"

    def to_json(self):
        return {"type": "biclique", "s": self.s}

    @property
    def vertex_count(self):
        return 2 * self.s

    @property
    def edge_count(self):
        return self.s * self.s


class CyclePattern(ForbiddenPattern):
    def __init__(self, t: int):
        if t < 2:
            raise ValueError(f"cycle half-length must be >= 2, got {t}")
        self.t = t

    def find(self, host):
        return find_even_cycle(host, 2 * self.t)

    def through_edge(self, host, u, v):
        return cycle_through_edge(host, 2 * self.t, u, v)

    def hits_edge(self, rows, cols, left, right, u, v):
        return _cycle_through(_Host(rows, cols, left, right), self.t, u, v, _Budget()) is not None

    def describe(self):
        return f"C{2 * self.t}"

    def to_json(self):
        return {"type": "cycle", "t": self.t}

    @property
    def vertex_count(self):
        return 2 * self.t

    @property
    def edge_count(self):
        return 2 * self.t


class GraphPattern(ForbiddenPattern):
    """An arbitrary fixed bipartite pattern; isolated vertices are ignored."""

    def __init__(self, graph: BipartiteGraph):
        self.graph = graph
        self.core, _, _ = _strip_isolated(graph)
        if self.core.edge_count == 0:
            raise ValueError("pattern graph needs at least one edge")
        self._plans = _anchored_plans(self.core)

    def find(self, host):
        return find_subgraph_copy(host, self.graph)

    def through_edge(self, host, u, v):
        return copy_through_edge(host, self.graph, u, v)

    def hits_edge(self, rows, cols, left, right, u, v):
        return _copy_through(_Host(rows, cols, left, right), self._plans, u, v, _Budget()) is not None

    def describe(self):
        return "G[" + ";".join(f"{u}-{v}" for u, v in self.core.edges()) + f"|{self.core.left_size}x{self.core.right_size}]"

    def to_json(self):
        return {"type": "graph", "graph": self.graph.to_json()}

    @property
    def vertex_count(self):
        return self.core.left_size + self.core.right_size

    @property
    def edge_count(self):
        return self.core.edge_count


def pattern_from_json(obj: dict) -> ForbiddenPattern:
    if not isinstance(obj, dict):
        raise GraphFormatError("pattern", "expected a JSON object")
    kind = obj.get("type")
    if kind == "biclique":
        return BicliquePattern(int(obj.get("s", 0)))
    if kind == "cycle":
        return CyclePattern(int(obj.get("t", 0)))
    if kind == "graph":
        return GraphPattern(BipartiteGraph.from_json(obj.get("graph")))
    raise GraphFormatError("pattern.type", f"unknown pattern type {kind!r}")


def as_pattern(g: BipartiteGraph) -> ForbiddenPattern:
    """Wrap a graph, using the specialised searches when it is a biclique or an even cycle."""
    core, _, _ = g.without_isolated()
    L, R, m = core.left_size, core.right_size, core.edge_count
    if L == R and m == L * R and L >= 1:
        return BicliquePattern(L)
    if L == R and L >= 2 and m == 2 * L and all(d == 2 for d in core.left_degrees() + core.right_degrees()) and core.is_connected():
        return CyclePattern(L)
    return GraphPattern(g)

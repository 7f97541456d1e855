"""
Exact bipartite Ramsey search by backtracking over edge colorings of K_{N,N}.

Edges are colored in row-major order, colors tried in ascending order
(red = 0 first). After each assignment only the forbidden pattern of the new
edge's color is checked, and only through that edge.

Symmetry breaking: rows and columns of the color matrix must be
lexicographically non-decreasing (double-lex). Every S_N x S_N orbit holds a
double-lex matrix, and the lexicographically least good coloring of an orbit
is double-lex, so the first witness found is the lexicographically least good
coloring overall.

The tree is cut after the first PREFIX_DEPTH edges; each surviving prefix is
one partition for bounds_layer.partition. Node limits apply per partition.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from core.certificate import GOOD_COLORING, Certificate, make_meta
from core.coloring import EdgeColoring
from core.errors import DomainError
from core.graph import BipartiteGraph
from core.patterns import BicliquePattern, CyclePattern, ForbiddenPattern, as_pattern

from ..partition import FOUND, INDETERMINATE, NONE, PartitionResult, SearchBudget, merge_first_found, run_partitions

log = logging.getLogger(__name__)

PREFIX_DEPTH = 4


@dataclass
class SearchOutcome:
    status: str
    coloring: Optional[EdgeColoring]
    nodes_explored: int
    n_host: int
    patterns: List[ForbiddenPattern] = field(default_factory=list)

    @property
    def exhausted(self) -> bool:
        return self.status == NONE

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "N": self.n_host,
            "nodes_explored": self.nodes_explored,
            "exhausted": self.exhausted,
            "coloring": self.coloring.to_json() if self.coloring is not None else None,
        }


class _Exhausted(Exception):
    pass


# =======================
# Search state
# =======================
class _ColoringSearch:
    """Mutable backtracking state for one partition."""

    def __init__(self, n: int, patterns: Sequence[ForbiddenPattern], node_limit: Optional[int], deadline: Optional[float]):
        self.n = n
        self.patterns = list(patterns)
        self.k = len(self.patterns)
        self.grid = [[-1] * n for _ in range(n)]
        self.rows = [[0] * n for _ in range(self.k)]
        self.cols = [[0] * n for _ in range(self.k)]
        self.row_tied = [True] * n
        self.col_tied = [True] * n
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _Exhausted()
        if self.deadline is not None and self.nodes % 512 == 0 and time.time() > self.deadline:
            raise _Exhausted()

    def lowest_color(self, u: int, v: int) -> int:
        lo = 0
        if u > 0 and self.row_tied[u]:
            lo = self.grid[u - 1][v]
        if v > 0 and self.col_tied[v] and self.grid[u][v - 1] > lo:
            lo = self.grid[u][v - 1]
        return lo

    def assign(self, u: int, v: int, c: int) -> Tuple[bool, bool]:
        self.grid[u][v] = c
        self.rows[c][u] |= 1 << v
        self.cols[c][v] |= 1 << u
        saved = (self.row_tied[u], self.col_tied[v])
        if u > 0 and self.row_tied[u] and c != self.grid[u - 1][v]:
            self.row_tied[u] = False
        if v > 0 and self.col_tied[v] and c != self.grid[u][v - 1]:
            self.col_tied[v] = False
        return saved

    def unassign(self, u: int, v: int, c: int, saved: Tuple[bool, bool]):
        self.row_tied[u], self.col_tied[v] = saved
        self.rows[c][u] &= ~(1 << v)
        self.cols[c][v] &= ~(1 << u)
        self.grid[u][v] = -1

    def creates_pattern(self, u: int, v: int, c: int) -> bool:
        return self.patterns[c].hits_edge(self.rows[c], self.cols[c], self.n, self.n, u, v)

    def children(self, e: int):
        """Yield every admissible color of edge ``e``; the color stays assigned while the caller runs."""
        u, v = divmod(e, self.n)
        for c in range(self.lowest_color(u, v), self.k):
            self.tick()
            saved = self.assign(u, v, c)
            if not self.creates_pattern(u, v, c):
                yield c
            self.unassign(u, v, c, saved)

    def dfs(self, e: int) -> bool:
        if e == self.n * self.n:
            return True
        for _ in self.children(e):
            if self.dfs(e + 1):
                return True
        return False

    def prefixes(self, depth: int) -> List[List[int]]:
        out: List[List[int]] = []
        stack: List[int] = []

        def walk(e: int):
            if e == depth:
                out.append(list(stack))
                return
            for c in self.children(e):
                stack.append(c)
                walk(e + 1)
                stack.pop()

        walk(0)
        return out

    def replay(self, prefix: Sequence[int]):
        for e, c in enumerate(prefix):
            u, v = divmod(e, self.n)
            self.assign(u, v, c)


def _solve_prefix(job) -> PartitionResult:
    n, patterns, prefix, node_limit, deadline = job
    state = _ColoringSearch(n, patterns, node_limit, deadline)
    state.replay(prefix)
    try:
        found = state.dfs(len(prefix))
    except _Exhausted:
        return PartitionResult(INDETERMINATE, None, state.nodes)
    if found:
        return PartitionResult(FOUND, [list(r) for r in state.grid], state.nodes)
    return PartitionResult(NONE, None, state.nodes)


# =======================
# Public searches
# =======================
def search_good_coloring(patterns: Sequence[ForbiddenPattern], n: int, budget: SearchBudget) -> SearchOutcome:
    """
    Search a coloring of K_{n,n} with colors 0..len(patterns)-1 in which no
    color class i contains ``patterns[i]``.
    """
    budget.check_side(n, "--nmax")
    if n < 0:
        raise DomainError(f"host side must be non-negative, got {n}")
    k = len(patterns)
    if k < 2:
        raise DomainError("need at least two colors")
    deadline = budget.deadline()

    root = _ColoringSearch(n, patterns, None, deadline)
    depth = min(PREFIX_DEPTH, n * n)
    try:
        prefixes = root.prefixes(depth)
    except _Exhausted:
        return SearchOutcome(INDETERMINATE, None, root.nodes, n, list(patterns))
    jobs = [(n, list(patterns), p, budget.node_limit, deadline) for p in prefixes]
    results = run_partitions(_solve_prefix, jobs, budget.workers, stop=lambda r: r.status == FOUND)
    merged = merge_first_found(results, extra_nodes=root.nodes)

    coloring = None
    if merged.status == FOUND:
        coloring = EdgeColoring(n, k, merged.witness if n else [])
        if not is_good_coloring(coloring, patterns):
            raise AssertionError("search returned a coloring that fails re-verification")
    log.info(f"[BR] N={n} status={merged.status} nodes={merged.nodes} partitions={len(results)}/{len(jobs)}")
    return SearchOutcome(merged.status, coloring, merged.nodes, n, list(patterns))


def is_good_coloring(c: EdgeColoring, patterns: Sequence[ForbiddenPattern]) -> bool:
    """Fresh pattern search on every color class."""
    if c.num_colors != len(patterns):
        return False
    return all(p.find(c.color_class(i)) is None for i, p in enumerate(patterns))


def exists_good_coloring(g1: BipartiteGraph, g2: BipartiteGraph, n: int, budget: SearchBudget) -> SearchOutcome:
    """Red/blue coloring of K_{n,n} with no red ``g1`` and no blue ``g2``."""
    return search_good_coloring([as_pattern(g1), as_pattern(g2)], n, budget)


def exists_good_coloring_multi(cycle_t: int, k: int, biclique_n: int, n: int, budget: SearchBudget) -> SearchOutcome:
    """(k+1)-coloring with no C_{2t} in colors 0..k-1 and no K_{n,n} in color k."""
    if cycle_t < 2:
        raise DomainError(f"cycle half-length must be >= 2, got {cycle_t}")
    if k < 1:
        raise DomainError(f"need at least one cycle color, got {k}")
    if biclique_n < 1:
        raise DomainError(f"biclique side must be >= 1, got {biclique_n}")
    patterns: List[ForbiddenPattern] = [CyclePattern(cycle_t) for _ in range(k)] + [BicliquePattern(biclique_n)]
    return search_good_coloring(patterns, n, budget)


# =======================
# br(g1, g2)
# =======================
@dataclass
class RamseyResult:
    """
    ``value`` is br(g1, g2) when ``status == "determined"``. ``witness`` is the
    good coloring at value - 1 (the empty coloring when value is 1).
    """

    status: str
    value: Optional[int]
    witness: Optional[EdgeColoring]
    outcomes: List[SearchOutcome]
    patterns: List[ForbiddenPattern]

    @property
    def determined(self) -> bool:
        return self.status == "determined"

    def refutation(self) -> Optional[dict]:
        if not self.determined:
            return None
        last = self.outcomes[-1]
        return {"N": last.n_host, "nodes_explored": last.nodes_explored, "exhausted": True}

    def certificate(self, seed: Optional[int] = None, stamp: bool = False) -> Optional[Certificate]:
        if not self.determined or self.witness is None:
            return None
        n = self.witness.n_host
        names = [p.describe() for p in self.patterns]
        claims = [
            f"color class {i} of this coloring of K{n},{n} contains no {name}" for i, name in enumerate(names)
        ]
        claims.append(f"br({names[0]},{names[1]}) > {n}")
        payload = {
            "N": n,
            "coloring": self.witness.to_json(),
            "patterns": [p.to_json() for p in self.patterns],
            "refutation": self.refutation(),
        }
        return Certificate(GOOD_COLORING, claims, payload, make_meta(seed=seed, stamp=stamp))

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "value": self.value,
            "patterns": [p.describe() for p in self.patterns],
            "outcomes": [
                {"N": o.n_host, "status": o.status, "nodes_explored": o.nodes_explored} for o in self.outcomes
            ],
            "refutation": self.refutation(),
        }


def br_exact(g1: BipartiteGraph, g2: BipartiteGraph, budget: SearchBudget) -> RamseyResult:
    """
    Least N such that every red/blue coloring of K_{N,N} has a red ``g1`` or a
    blue ``g2``, scanning N = 1, 2, ... up to ``budget.max_side``.
    """
    patterns = [as_pattern(g1), as_pattern(g2)]
    outcomes: List[SearchOutcome] = []
    witness = EdgeColoring(0, 2, [])
    for n in range(1, budget.max_side + 1):
        outcome = search_good_coloring(patterns, n, budget)
        outcomes.append(outcome)
        if outcome.status == FOUND:
            witness = outcome.coloring
            continue
        if outcome.status == NONE:
            return RamseyResult("determined", n, witness, outcomes, patterns)
        log.warning(f"[BR] budget exhausted at N={n}; br is undetermined")
        return RamseyResult(INDETERMINATE, None, None, outcomes, patterns)
    log.warning(f"[BR] good colorings exist up to N={budget.max_side}; raise --nmax to go further")
    return RamseyResult(INDETERMINATE, None, None, outcomes, patterns)

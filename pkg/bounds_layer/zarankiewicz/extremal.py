"""
Exact Zarankiewicz numbers by branch-and-bound, plus the two closed-form
upper bounds used by the counting certifier.

z(r; P) = max edges of a subgraph of K_{r,r} with no copy of P, for
P = K_{s,s} (``z_exact``) or P = C_{2t} (``z_cycle_exact``).

Search: edges in row-major order, include before exclude; a branch is cut
when ``count + undecided <= best``. Rows and columns of the 0/1 matrix are
kept lexicographically non-increasing, which keeps one representative per
S_r x S_r orbit and makes the reported witness the lexicographically greatest
extremal graph.
"""

import logging
import math
import time
from dataclasses import dataclass
from decimal import Decimal, localcontext
from typing import List, Optional, Sequence

from core.certificate import EXTREMAL_GRAPH, Certificate, make_meta
from core.errors import DomainError
from core.graph import BipartiteGraph, complete_bipartite, empty_graph
from core.patterns import BicliquePattern, CyclePattern, ForbiddenPattern, pattern_from_json

from ..partition import FOUND, INDETERMINATE, PartitionResult, SearchBudget, merge_best, run_partitions

log = logging.getLogger(__name__)

PREFIX_DEPTH = 4
PRECISE_DIGITS = 50


# =======================
# Record
# =======================
@dataclass
class ExtremalRecord:
    r: int
    pattern: ForbiddenPattern
    value: int
    witness: BipartiteGraph
    nodes: int = 0
    exhausted: bool = True

    def verify(self) -> bool:
        """Witness fits K_{r,r}, has ``value`` edges and contains no forbidden copy."""
        w = self.witness
        if w.left_size != self.r or w.right_size != self.r:
            return False
        if w.edge_count != self.value or self.value > self.r * self.r:
            return False
        return self.pattern.find(w) is None

    def saturated(self) -> bool:
        """Every missing edge of the witness would close a forbidden copy."""
        w = self.witness
        for u in range(w.left_size):
            for v in range(w.right_size):
                if not w.has_edge(u, v) and self.pattern.through_edge(w.with_edge(u, v), u, v) is None:
                    return False
        return True

    def key(self) -> str:
        return f"{self.r}|{self.pattern.cache_key()}"

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "pattern": self.pattern.to_json(),
            "value": self.value,
            "witness": self.witness.to_json(),
            "nodes": self.nodes,
            "exhausted": self.exhausted,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExtremalRecord":
        return cls(
            r=int(obj["r"]),
            pattern=pattern_from_json(obj["pattern"]),
            value=int(obj["value"]),
            witness=BipartiteGraph.from_json(obj["witness"]),
            nodes=int(obj.get("nodes", 0)),
            exhausted=bool(obj.get("exhausted", True)),
        )

    def certificate(self, seed: Optional[int] = None, stamp: bool = False) -> Certificate:
        name = self.pattern.describe()
        claims = [f"z({self.r};{name}) >= {self.value}"]
        if self.exhausted:
            claims.append(f"z({self.r};{name}) = {self.value} by exhaustive search ({self.nodes} nodes)")
        return Certificate(EXTREMAL_GRAPH, claims, self.to_json(), make_meta(seed=seed, stamp=stamp))


# =======================
# Branch and bound
# =======================
class _Exhausted(Exception):
    pass


class _ExtremalSearch:
    def __init__(self, r: int, pattern: ForbiddenPattern, node_limit: Optional[int], deadline: Optional[float]):
        self.r = r
        self.pattern = pattern
        self.grid = [[0] * r for _ in range(r)]
        self.rows = [0] * r
        self.cols = [0] * r
        self.row_tied = [True] * r
        self.col_tied = [True] * r
        self.count = 0
        self.best = -1
        self.best_rows: Optional[List[int]] = None
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _Exhausted()
        if self.deadline is not None and self.nodes % 512 == 0 and time.time() > self.deadline:
            raise _Exhausted()

    def highest_value(self, u: int, v: int) -> int:
        hi = 1
        if u > 0 and self.row_tied[u]:
            hi = min(hi, self.grid[u - 1][v])
        if v > 0 and self.col_tied[v]:
            hi = min(hi, self.grid[u][v - 1])
        return hi

    def set(self, u: int, v: int, x: int):
        self.grid[u][v] = x
        if x:
            self.rows[u] |= 1 << v
            self.cols[v] |= 1 << u
            self.count += 1
        saved = (self.row_tied[u], self.col_tied[v])
        if u > 0 and self.row_tied[u] and x != self.grid[u - 1][v]:
            self.row_tied[u] = False
        if v > 0 and self.col_tied[v] and x != self.grid[u][v - 1]:
            self.col_tied[v] = False
        return saved

    def clear(self, u: int, v: int, x: int, saved):
        self.row_tied[u], self.col_tied[v] = saved
        if x:
            self.rows[u] &= ~(1 << v)
            self.cols[v] &= ~(1 << u)
            self.count -= 1
        self.grid[u][v] = 0

    def options(self, e: int):
        """Yield the admissible values of edge ``e`` (1 first); each stays set while the caller runs."""
        u, v = divmod(e, self.r)
        for x in range(self.highest_value(u, v), -1, -1):
            self.tick()
            saved = self.set(u, v, x)
            if not (x and self.pattern.hits_edge(self.rows, self.cols, self.r, self.r, u, v)):
                yield x
            self.clear(u, v, x, saved)

    def dfs(self, e: int):
        total = self.r * self.r
        if self.count + (total - e) <= self.best:
            return
        if e == total:
            self.best = self.count
            self.best_rows = list(self.rows)
            return
        for _ in self.options(e):
            self.dfs(e + 1)

    def prefixes(self, depth: int) -> List[List[int]]:
        out: List[List[int]] = []
        stack: List[int] = []

        def walk(e: int):
            if e == depth:
                out.append(list(stack))
                return
            for x in self.options(e):
                stack.append(x)
                walk(e + 1)
                stack.pop()

        walk(0)
        return out

    def replay(self, prefix: Sequence[int]):
        for e, x in enumerate(prefix):
            u, v = divmod(e, self.r)
            self.set(u, v, x)


def _solve_prefix(job) -> PartitionResult:
    r, pattern, prefix, node_limit, deadline = job
    state = _ExtremalSearch(r, pattern, node_limit, deadline)
    state.replay(prefix)
    status = FOUND
    try:
        state.dfs(len(prefix))
    except _Exhausted:
        status = INDETERMINATE
    if state.best_rows is None:
        return PartitionResult(status, None, state.nodes, None)
    return PartitionResult(status, state.best_rows, state.nodes, state.best)


def _trivial(r: int, pattern: ForbiddenPattern) -> Optional[ExtremalRecord]:
    if isinstance(pattern, BicliquePattern):
        if pattern.s > r:
            return ExtremalRecord(r, pattern, r * r, complete_bipartite(r, r))
        if pattern.s == 1:
            return ExtremalRecord(r, pattern, 0, empty_graph(r, r))
    if isinstance(pattern, CyclePattern) and pattern.t > r:
        return ExtremalRecord(r, pattern, r * r, complete_bipartite(r, r))
    return None


def z_search(r: int, pattern: ForbiddenPattern, budget: Optional[SearchBudget] = None, cache=None) -> ExtremalRecord:
    """
    Exact z(r; pattern).

    :param budget: host-side cap (``--z-max-side``), per-partition node limit, time limit, workers
    :param cache: optional store with ``get(r, pattern)`` / ``put(record)``; only exhausted records are stored
    """
    if r < 1:
        raise DomainError(f"host side must be >= 1, got {r}")
    budget = budget or SearchBudget()
    trivial = _trivial(r, pattern)
    if trivial is not None:
        return trivial
    if cache is not None:
        hit = cache.get(r, pattern)
        if hit is not None:
            return hit
    budget.check_side(r, "--z-max-side")

    deadline = budget.deadline()
    root = _ExtremalSearch(r, pattern, None, deadline)
    prefixes = root.prefixes(min(PREFIX_DEPTH, r * r))
    jobs = [(r, pattern, p, budget.node_limit, deadline) for p in prefixes]
    merged = merge_best(run_partitions(_solve_prefix, jobs, budget.workers), extra_nodes=root.nodes)

    if merged.value is None:
        log.warning(f"[ZAR] budget exhausted before any leaf for z({r};{pattern.describe()})")
        return ExtremalRecord(r, pattern, 0, empty_graph(r, r), merged.nodes, False)
    witness = BipartiteGraph(r, r, merged.witness)
    record = ExtremalRecord(r, pattern, merged.value, witness, merged.nodes, merged.status == FOUND)
    if not record.verify():
        raise AssertionError("extremal search returned an invalid witness")
    if record.exhausted:
        log.info(f"[ZAR] z({r};{pattern.describe()}) = {record.value} ({record.nodes} nodes)")
        if cache is not None:
            cache.put(record)
    else:
        log.warning(f"[ZAR] budget exhausted: z({r};{pattern.describe()}) >= {record.value} only")
    return record


def z_exact(r: int, s: int, budget: Optional[SearchBudget] = None, cache=None) -> ExtremalRecord:
    """z(r; s): maximum edges of a K_{s,s}-free subgraph of K_{r,r}."""
    if s < 1:
        raise DomainError(f"biclique side must be >= 1, got {s}")
    return z_search(r, BicliquePattern(s), budget, cache)


def z_cycle_exact(r: int, t: int, budget: Optional[SearchBudget] = None, cache=None) -> ExtremalRecord:
    """z(r; C_{2t}): maximum edges of a C_{2t}-free subgraph of K_{r,r}."""
    if t < 2:
        raise DomainError(f"cycle half-length must be >= 2, got {t}")
    return z_search(r, CyclePattern(t), budget, cache)


# =======================
# Closed-form bounds
# =======================
def _check_bollobas(r: int, s: int):
    if s < 2 or r < s:
        raise DomainError(f"bound needs r >= s >= 2, got r={r}, s={s}")


def bollobas_bound(r: int, s: int) -> float:
    """(s-1)^{1/s} (r-s+1) r^{1-1/s} + (s-1) r, for r >= s >= 2."""
    _check_bollobas(r, s)
    return (s - 1) ** (1.0 / s) * (r - s + 1) * r ** (1.0 - 1.0 / s) + (s - 1) * r


def naor_verstraete_bound(r: int, t: int) -> float:
    """(2t-3)(r^{1+1/t} + 2r), for t >= 2 and r >= 1."""
    if t < 2:
        raise DomainError(f"cycle half-length must be >= 2, got {t}")
    if r < 1:
        raise DomainError(f"host side must be >= 1, got {r}")
    return (2 * t - 3) * (r ** (1.0 + 1.0 / t) + 2 * r)


def bollobas_bound_precise(r: int, s: int) -> Decimal:
    _check_bollobas(r, s)
    with localcontext() as ctx:
        ctx.prec = PRECISE_DIGITS
        S, R = Decimal(s), Decimal(r)
        return (S - 1) ** (1 / S) * (R - S + 1) * R ** (1 - 1 / S) + (S - 1) * R


def naor_verstraete_bound_precise(r: int, t: int) -> Decimal:
    naor_verstraete_bound(r, t)
    with localcontext() as ctx:
        ctx.prec = PRECISE_DIGITS
        T, R = Decimal(t), Decimal(r)
        return (2 * T - 3) * (R ** (1 + 1 / T) + 2 * R)


def bound_agrees(fast: float, precise: Decimal) -> bool:
    """The double-precision value sits within a few ulps of the 50-digit value."""
    return abs(Decimal(fast) - precise) <= Decimal(8 * math.ulp(fast))

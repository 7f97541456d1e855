"""
Constructive lower bounds: resample violated events until the random
red/blue coloring of K_{N,N} has no red copy of G and no blue K_{n,n}.

One seeded ``numpy`` generator drives the whole run. Each step takes the least
violated event (red copies before blue bicliques, each the lexicographically
least witness its search returns) and redraws only that event's edges, in
sorted order. The outcome is therefore a function of (pattern, N, n, red_prob,
seed, budget) alone.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from core.certificate import LLL_LOWER_BOUND, Certificate, make_meta
from core.coloring import RED, EdgeColoring
from core.errors import DomainError
from core.graph import BipartiteGraph
from core.patterns import as_pattern, find_biclique

log = logging.getLogger(__name__)

BLUE = 1
SUCCESS = "success"
EXHAUSTED = "exhausted"


# =======================
# Verification
# =======================
def certify_lower_bound(g: BipartiteGraph, n: int, coloring: EdgeColoring) -> bool:
    """True iff ``coloring`` has no red copy of ``g`` and no blue K_{n,n}."""
    if coloring.num_colors != 2:
        raise DomainError(f"expected a red/blue coloring, got {coloring.num_colors} colors")
    if n < 1:
        raise DomainError(f"biclique side must be >= 1, got {n}")
    if as_pattern(g).find(coloring.color_class(RED)) is not None:
        return False
    return find_biclique(coloring.color_class(BLUE), n) is None


def lower_bound_certificate(
    g: BipartiteGraph,
    n: int,
    coloring: EdgeColoring,
    seed: Optional[int] = None,
    stamp: bool = False,
    extra: Optional[dict] = None,
) -> Optional[Certificate]:
    """Wrap a verified coloring; None when the coloring does not certify."""
    if not certify_lower_bound(g, n, coloring):
        return None
    N = coloring.n_host
    name = as_pattern(g).describe()
    claims = [
        f"red class of this coloring of K{N},{N} contains no {name}",
        f"blue class contains no K{n},{n}",
        f"br({name},K{n},{n}) > {N}",
    ]
    payload = {"N": N, "n": n, "pattern": g.to_json(), "coloring": coloring.to_json()}
    payload.update(extra or {})
    return Certificate(LLL_LOWER_BOUND, claims, payload, make_meta(seed=seed, stamp=stamp))


# =======================
# Resampling
# =======================
@dataclass
class ConstructionReport:
    status: str
    coloring: Optional[EdgeColoring]
    N: int
    n: int
    red_prob: float
    seed: int
    budget: int
    iterations: int
    red_resamples: int
    blue_resamples: int
    pattern: BipartiteGraph

    @property
    def succeeded(self) -> bool:
        return self.status == SUCCESS

    def statistics(self) -> dict:
        return {
            "iterations": self.iterations,
            "red_resamples": self.red_resamples,
            "blue_resamples": self.blue_resamples,
            "budget": self.budget,
        }

    def certificate(self, stamp: bool = False) -> Optional[Certificate]:
        if not self.succeeded:
            return None
        extra = {"red_prob": self.red_prob, "statistics": self.statistics()}
        return lower_bound_certificate(self.pattern, self.n, self.coloring, self.seed, stamp, extra)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "N": self.N,
            "n": self.n,
            "red_prob": self.red_prob,
            "seed": self.seed,
            "statistics": self.statistics(),
            "coloring": self.coloring.to_json() if self.coloring is not None else None,
        }


def _class_graph(mat: np.ndarray, color: int) -> BipartiteGraph:
    n = mat.shape[0]
    rows = []
    for u in range(n):
        row = 0
        for v in np.flatnonzero(mat[u] == color):
            row |= 1 << int(v)
        rows.append(row)
    return BipartiteGraph(n, n, rows)


def _violated_event(mat: np.ndarray, red_pattern, n: int) -> Tuple[Optional[str], List[Tuple[int, int]]]:
    w = red_pattern.find(_class_graph(mat, RED))
    if w is not None:
        return "red", sorted(w.host_edges())
    w = find_biclique(_class_graph(mat, BLUE), n)
    if w is not None:
        return "blue", sorted(w.host_edges())
    return None, []


def construct_coloring(
    g: BipartiteGraph,
    N: int,
    n: int,
    red_prob: float,
    seed: int = 0,
    resample_budget: int = 10_000,
) -> ConstructionReport:
    """
    :param g: forbidden red pattern (at least one edge)
    :param N: host side
    :param n: forbidden blue biclique side (n <= N)
    :param red_prob: probability that a (re)drawn edge is red
    :param resample_budget: maximum number of event resamplings
    """
    if g.edge_count < 1:
        raise DomainError("pattern needs at least one edge")
    if not 1 <= n <= N:
        raise DomainError(f"need 1 <= n <= N, got n={n}, N={N}")
    if not 0.0 <= red_prob <= 1.0:
        raise DomainError(f"red probability must lie in [0, 1], got {red_prob}")
    if resample_budget < 0:
        raise DomainError(f"resample budget must be non-negative, got {resample_budget}")

    red_pattern = as_pattern(g)
    rng = np.random.default_rng(seed)
    mat = np.where(rng.random((N, N)) < red_prob, RED, BLUE).astype(np.int64)
    counts = {"red": 0, "blue": 0}
    iterations = 0

    while True:
        kind, edges = _violated_event(mat, red_pattern, n)
        if kind is None:
            break
        if iterations >= resample_budget:
            log.warning(f"[MT] resample budget {resample_budget} exhausted (red={counts['red']}, blue={counts['blue']})")
            return ConstructionReport(EXHAUSTED, None, N, n, red_prob, seed, resample_budget, iterations, counts["red"], counts["blue"], g)
        draws = rng.random(len(edges))
        for (u, v), x in zip(edges, draws):
            mat[u, v] = RED if x < red_prob else BLUE
        counts[kind] += 1
        iterations += 1
        log.debug(f"[MT] step {iterations}: resampled {kind} event on {len(edges)} edges")

    coloring = EdgeColoring(N, 2, mat)
    if not certify_lower_bound(g, n, coloring):
        raise AssertionError("resampler produced a coloring that fails re-verification")
    log.info(f"[MT] good coloring of K{N},{N} after {iterations} resamples")
    return ConstructionReport(SUCCESS, coloring, N, n, red_prob, seed, resample_budget, iterations, counts["red"], counts["blue"], g)

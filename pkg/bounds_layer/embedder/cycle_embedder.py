"""
Greedy blue embedding of a sparse bipartite target G (m edges, no isolated
vertices) into a red/blue coloring of K_{N,N} that has no red C_{2t}.

Pipeline:
    1. W0 = vertices of red degree >= 7t sqrt(m). When |W0| >= sqrt(m), the red
       graph between W0 (its larger side) and the opposite side is handed to
       the dense-subgraph cycle finder; a red C_{2t} ends the run.
    2. W0 is pruned from the host.
    3. Phase 1 (optional): a blue K_{a,a}, a ~ c0 sqrt(m) ln m, receives the a
       highest-degree vertices of each side of G.
    4. Greedy: vertices of G in non-increasing degree order (ties by side,
       then index), each mapped to the lowest-index unused host vertex that
       is blue-adjacent to the images of its embedded neighbours. Orientation
       0 (G left -> host left) first, then the flipped one.

A stuck greedy is an outcome, not an error: its StuckReport carries the data
that the counting argument inspects (W', D, unused vertices) and
``stuck_diagnostics`` re-checks every inequality on it.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.certificate import EMBEDDING, Certificate, make_meta
from core.coloring import RED, EdgeColoring
from core.errors import DomainError, IntegrityError, ResourceLimitError, StructuralFailure
from core.graph import LEFT, RIGHT, BipartiteGraph, iter_bits, mask_of
from core.patterns import CYCLE, PatternWitness, find_biclique, find_even_cycle

log = logging.getLogger(__name__)

Vertex = Tuple[int, int]

EMBEDDED = "embedded"
RED_CYCLE = "red-cycle"
STUCK = "stuck"
STRUCTURAL = "structural"

FOUND = "found"
NOT_APPLICABLE = "not-applicable"
NO_CYCLE = "no-cycle"


# =======================
# Thresholds
# =======================
def _root(m: int) -> Optional[int]:
    r = math.isqrt(m)
    return r if r * r == m else None


def _at_least(value: float, threshold: float) -> bool:
    """value >= threshold, tolerating half an ulp of rounding in the threshold."""
    return value >= threshold - 0.5 * math.ulp(threshold)


def host_size(m: int, t: int) -> int:
    """ceil(m/2 + 29 t sqrt(m) / 2)."""
    if m < 1:
        raise DomainError(f"target needs at least one edge, got m={m}")
    if t < 2:
        raise DomainError(f"cycle half-length must be >= 2, got {t}")
    r = _root(m)
    if r is not None:
        return (m + 29 * t * r + 1) // 2
    return math.ceil(m / 2 + 29 * t * math.sqrt(m) / 2)


@dataclass(frozen=True)
class EmbedConfig:
    """
    :param t: half-length of the forbidden red cycle
    :param m: edge count of the target
    :param c0: phase-1 biclique constant
    :param phase1_node_budget: node budget of the phase-1 biclique search
    :param phase1_max_side: cap on the phase-1 biclique side
    :param prune: remove W0 before embedding
    """

    t: int
    m: int
    c0: float = 0.25
    phase1: bool = True
    phase1_node_budget: int = 200_000
    phase1_max_side: int = 8
    prune: bool = True

    def __post_init__(self):
        if self.t < 2:
            raise DomainError(f"cycle half-length must be >= 2, got {self.t}")
        if self.m < 1:
            raise DomainError(f"target needs at least one edge, got m={self.m}")
        if not self.c0 > 0:
            raise DomainError(f"c0 must be positive, got {self.c0}")

    @classmethod
    def from_target(cls, g: BipartiteGraph, t: int, c0: float = 0.25, **kwargs) -> "EmbedConfig":
        check_target(g)
        return cls(t=t, m=g.edge_count, c0=c0, **kwargs)

    @property
    def sqrt_m(self) -> float:
        r = _root(self.m)
        return float(r) if r is not None else math.sqrt(self.m)

    @property
    def host_size(self) -> int:
        return host_size(self.m, self.t)

    @property
    def prune_threshold(self) -> float:
        return 7 * self.t * self.sqrt_m

    @property
    def lemma_threshold(self) -> float:
        return 6 * self.t * self.sqrt_m

    @property
    def phase1_side(self) -> int:
        if self.m < 2:
            return 0
        return min(math.ceil(self.c0 * self.sqrt_m * math.log(self.m)), self.phase1_max_side)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "m": self.m,
            "c0": self.c0,
            "phase1": self.phase1,
            "phase1_node_budget": self.phase1_node_budget,
            "phase1_max_side": self.phase1_max_side,
            "prune": self.prune,
        }


def check_target(g: BipartiteGraph):
    if g.edge_count < 1:
        raise DomainError("target needs at least one edge")
    iso = g.isolated_vertices()
    if iso:
        raise DomainError(f"target has isolated vertices {iso[:5]}")


def _check_two_colors(c: EdgeColoring):
    if c.num_colors != 2:
        raise DomainError(f"expected a red/blue coloring, got {c.num_colors} colors")


# =======================
# Host view
# =======================
def _mask_rows(flags: np.ndarray) -> List[int]:
    """One little-endian bitmask per row of a boolean matrix."""
    if flags.shape[1] == 0:
        return [0] * flags.shape[0]
    packed = np.packbits(flags, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class _HostView:
    """Blue/red adjacency of K_{N,N} restricted to the allowed vertices, indexed [host side][vertex]."""

    def __init__(self, c: EdgeColoring, allowed: Tuple[int, int]):
        red = c.matrix == RED
        blue = ~red
        self.n = c.n_host
        self.allowed = allowed
        self.blue = (
            [row & allowed[RIGHT] for row in _mask_rows(blue)],
            [col & allowed[LEFT] for col in _mask_rows(blue.T)],
        )
        self.red = (
            [row & allowed[RIGHT] for row in _mask_rows(red)],
            [col & allowed[LEFT] for col in _mask_rows(red.T)],
        )

    def red_degree(self, side: int, x: int) -> int:
        return self.red[side][x].bit_count()

    def counts(self) -> Tuple[int, int]:
        return self.allowed[LEFT].bit_count(), self.allowed[RIGHT].bit_count()


@dataclass
class HighDegreeSet:
    left: List[int]
    right: List[int]
    threshold: float
    sqrt_m: float

    @property
    def size(self) -> int:
        return len(self.left) + len(self.right)

    @property
    def large(self) -> bool:
        """|W0| >= sqrt(m): the branch that forces a red C_{2t}."""
        return _at_least(self.size, self.sqrt_m)

    def allowed(self, n_host: int) -> Tuple[int, int]:
        full = (1 << n_host) - 1
        return full & ~mask_of(self.left), full & ~mask_of(self.right)

    def to_json(self) -> dict:
        return {"left": self.left, "right": self.right, "size": self.size, "threshold": self.threshold, "large": self.large}


def high_red_degree_set(c: EdgeColoring, t: int, m: int) -> HighDegreeSet:
    """Vertices of either side whose red degree is at least 7t sqrt(m)."""
    _check_two_colors(c)
    cfg = EmbedConfig(t=t, m=m)
    thr = cfg.prune_threshold
    left_deg, right_deg = c.red_degrees()
    left = [int(u) for u in range(c.n_host) if _at_least(int(left_deg[u]), thr)]
    right = [int(v) for v in range(c.n_host) if _at_least(int(right_deg[v]), thr)]
    return HighDegreeSet(left, right, thr, cfg.sqrt_m)


def _allowed_sets(c: EdgeColoring, config: EmbedConfig) -> Tuple[int, int]:
    if not config.prune:
        full = (1 << c.n_host) - 1
        return full, full
    return high_red_degree_set(c, config.t, config.m).allowed(c.n_host)


# =======================
# Results
# =======================
@dataclass
class Embedding:
    """``left_map[i]`` / ``right_map[j]``: host index of target vertex i / j; with ``flipped`` the target's left side sits on the host's right."""

    left_map: List[int]
    right_map: List[int]
    flipped: bool
    n_host: int

    def host_edge(self, u: int, v: int) -> Tuple[int, int]:
        a, b = self.left_map[u], self.right_map[v]
        return (b, a) if self.flipped else (a, b)

    def verify(self, coloring: EdgeColoring, target: BipartiteGraph) -> bool:
        """Injective, side-consistent, and every target edge lands on a blue host edge."""
        if coloring.n_host != self.n_host or coloring.num_colors != 2:
            return False
        if len(self.left_map) != target.left_size or len(self.right_map) != target.right_size:
            return False
        for images in (self.left_map, self.right_map):
            if len(set(images)) != len(images) or any(not 0 <= x < self.n_host for x in images):
                return False
        return all(coloring.color(*self.host_edge(u, v)) != RED for u, v in target.edges())

    def to_json(self) -> dict:
        return {"left_map": self.left_map, "right_map": self.right_map, "flipped": self.flipped, "N": self.n_host}

    @classmethod
    def from_json(cls, obj: dict) -> "Embedding":
        return cls([int(x) for x in obj["left_map"]], [int(x) for x in obj["right_map"]], bool(obj["flipped"]), int(obj["N"]))

    def certificate(self, coloring: EdgeColoring, target: BipartiteGraph, t: int, seed: Optional[int] = None, stamp: bool = False) -> Certificate:
        if not self.verify(coloring, target):
            raise IntegrityError("embedding does not map the target into the blue class")
        N = self.n_host
        claims = [
            f"target with {target.edge_count} edges embeds in the blue class of this coloring of K{N},{N}",
            "every target edge maps to a blue host edge",
        ]
        payload = {"N": N, "t": t, "target": target.to_json(), "coloring": coloring.to_json(), "embedding": self.to_json()}
        return Certificate(EMBEDDING, claims, payload, make_meta(seed=seed, stamp=stamp))


@dataclass
class StuckReport:
    """
    First failing greedy step.

    :param r: number of target vertices embedded before the failure
    :param stuck_vertex: (side, index) in the target
    :param candidate_side: host side the stuck vertex had to land on
    :param W_prime: host images (side, index) of its embedded neighbours
    :param D: sum over W_prime of red degrees into the allowed candidate side
    :param unused_count: allowed host vertices (both sides) outside the partial image
    :param unused_candidate_count: the same, on the candidate side only
    """

    r: int
    stuck_vertex: Vertex
    candidate_side: int
    W_prime: List[Vertex]
    D: int
    pruned: bool
    unused_count: int
    unused_candidate_count: int
    left_map: List[Optional[int]]
    right_map: List[Optional[int]]
    flipped: bool
    m: int
    t: int
    n_host: int

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "stuck_vertex": list(self.stuck_vertex),
            "candidate_side": self.candidate_side,
            "W_prime": [list(w) for w in self.W_prime],
            "D": self.D,
            "pruned": self.pruned,
            "unused_count": self.unused_count,
            "unused_candidate_count": self.unused_candidate_count,
            "left_map": self.left_map,
            "right_map": self.right_map,
            "flipped": self.flipped,
            "m": self.m,
            "t": self.t,
            "N": self.n_host,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "StuckReport":
        try:
            return cls(
                r=int(obj["r"]),
                stuck_vertex=(int(obj["stuck_vertex"][0]), int(obj["stuck_vertex"][1])),
                candidate_side=int(obj["candidate_side"]),
                W_prime=[(int(s), int(x)) for s, x in obj["W_prime"]],
                D=int(obj["D"]),
                pruned=bool(obj["pruned"]),
                unused_count=int(obj["unused_count"]),
                unused_candidate_count=int(obj["unused_candidate_count"]),
                left_map=[None if x is None else int(x) for x in obj["left_map"]],
                right_map=[None if x is None else int(x) for x in obj["right_map"]],
                flipped=bool(obj["flipped"]),
                m=int(obj["m"]),
                t=int(obj["t"]),
                n_host=int(obj["N"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise IntegrityError(f"malformed stuck report: {e}")


# =======================
# Greedy
# =======================
def _vertex_order(g: BipartiteGraph) -> List[Vertex]:
    return sorted(g.vertices(), key=lambda v: (-g.degree(*v), v[0], v[1]))


def _greedy(
    view: _HostView,
    g: BipartiteGraph,
    order: Sequence[Vertex],
    flip: int,
    config: EmbedConfig,
    pre: Optional[Dict[Vertex, int]] = None,
) -> Union[Embedding, StuckReport]:
    image: Dict[Vertex, int] = {}
    used = [0, 0]
    for v, x in (pre or {}).items():
        image[v] = x
        used[v[0] ^ flip] |= 1 << x

    for v in order:
        if v in image:
            continue
        side, i = v
        hs = side ^ flip
        other = 1 - side
        W = [(other, j) for j in g.neighbors(side, i) if (other, j) in image]
        cand = view.allowed[hs] & ~used[hs]
        for w in W:
            cand &= view.blue[hs ^ 1][image[w]]
        if cand == 0:
            w_prime = sorted((hs ^ 1, image[w]) for w in W)
            unused = [view.allowed[s] & ~used[s] for s in (LEFT, RIGHT)]
            return StuckReport(
                r=len(image),
                stuck_vertex=v,
                candidate_side=hs,
                W_prime=w_prime,
                D=sum(view.red_degree(s, x) for s, x in w_prime),
                pruned=config.prune,
                unused_count=unused[LEFT].bit_count() + unused[RIGHT].bit_count(),
                unused_candidate_count=unused[hs].bit_count(),
                left_map=[image.get((LEFT, a)) for a in range(g.left_size)],
                right_map=[image.get((RIGHT, b)) for b in range(g.right_size)],
                flipped=bool(flip),
                m=config.m,
                t=config.t,
                n_host=view.n,
            )
        x = (cand & -cand).bit_length() - 1
        image[v] = x
        used[hs] |= 1 << x

    return Embedding(
        [image[(LEFT, a)] for a in range(g.left_size)],
        [image[(RIGHT, b)] for b in range(g.right_size)],
        bool(flip),
        view.n,
    )


def _fits(view: _HostView, g: BipartiteGraph, flip: int) -> bool:
    counts = view.counts()
    return g.left_size <= counts[flip] and g.right_size <= counts[1 - flip]


def greedy_blue_embed(
    c: EdgeColoring,
    g: BipartiteGraph,
    config: EmbedConfig,
    pre_embedded: Optional[Dict[Vertex, int]] = None,
) -> Union[Embedding, StuckReport]:
    """
    Embed ``g`` into the blue class of ``c`` (pruned of W0 when ``config.prune``).

    :param pre_embedded: fixed images for some target vertices (orientation 0 only)
    :return: the Embedding, or the StuckReport of orientation 0 (of the flipped
             orientation when only that one fits)
    """
    _check_two_colors(c)
    check_target(g)
    view = _HostView(c, _allowed_sets(c, config))
    order = _vertex_order(g)
    flips = [f for f in (0, 1) if _fits(view, g, f)]
    if pre_embedded:
        flips = [f for f in flips if f == 0]
    if not flips:
        L, R = view.counts()
        raise StructuralFailure(f"target parts {g.left_size}x{g.right_size} do not fit the host parts {L}x{R}")

    first: Optional[StuckReport] = None
    for flip in flips:
        res = _greedy(view, g, order, flip, config, pre_embedded)
        if isinstance(res, Embedding):
            log.info(f"[EMBED] greedy embedded {g.edge_count} edges (flipped={bool(flip)})")
            return res
        log.debug(f"[EMBED] orientation {flip} stuck at r={res.r}, |W'|={len(res.W_prime)}")
        if first is None:
            first = res
    return first


# =======================
# Diagnostics
# =======================
def stuck_diagnostics(rep: StuckReport, c: EdgeColoring, config: EmbedConfig) -> dict:
    """
    Recount D and the unused vertices from ``c`` and test the inequalities of
    the counting argument on this stuck state.
    """
    _check_two_colors(c)
    if rep.n_host != c.n_host:
        raise IntegrityError(f"report is for N={rep.n_host}, coloring has N={c.n_host}")
    if (rep.m, rep.t) != (config.m, config.t):
        raise IntegrityError(f"report is for m={rep.m}, t={rep.t}; config has m={config.m}, t={config.t}")
    full = (1 << c.n_host) - 1
    allowed = high_red_degree_set(c, config.t, config.m).allowed(c.n_host) if rep.pruned else (full, full)
    view = _HostView(c, allowed)
    hs = rep.candidate_side
    for s, x in rep.W_prime:
        if s != hs ^ 1 or not (view.allowed[s] >> x) & 1:
            raise IntegrityError(f"W' vertex {(s, x)} is not an allowed host vertex opposite the candidate side")

    D = sum(view.red_degree(s, x) for s, x in rep.W_prime)
    if D != rep.D:
        raise IntegrityError(f"report claims D={rep.D}, recount gives {D}")
    used = [0, 0]
    for tside, images in ((LEFT, rep.left_map), (RIGHT, rep.right_map)):
        for x in images:
            if x is not None:
                used[tside ^ int(rep.flipped)] |= 1 << x
    if sum(u.bit_count() for u in used) != rep.r:
        raise IntegrityError(f"report claims r={rep.r}, partial map has {sum(u.bit_count() for u in used)} images")
    unused = [view.allowed[s] & ~used[s] for s in (LEFT, RIGHT)]
    unused_count = unused[LEFT].bit_count() + unused[RIGHT].bit_count()
    if unused_count != rep.unused_count or unused[hs].bit_count() != rep.unused_candidate_count:
        raise IntegrityError("unused-vertex counts do not match the coloring")

    w_mask = mask_of(x for _, x in rep.W_prime)
    violators = [x for x in iter_bits(unused[hs]) if not view.red[hs][x] & w_mask]

    m, t, r, w = config.m, config.t, rep.r, len(rep.W_prime)
    sq = config.sqrt_m
    cap = config.prune_threshold
    checks = {
        "observation": {"holds": not violators, "violators": [[hs, x] for x in violators]},
        "degree_cap": {"holds": D <= cap * w, "D": D, "bound": cap * w},
        "unused_candidate_bound": {"holds": D >= rep.unused_candidate_count, "D": D, "unused": rep.unused_candidate_count},
        "unused_both_sides_bound": {"holds": D >= unused_count, "D": D, "unused": unused_count},
        "degree_sum": {"holds": r * w <= 2 * m, "lhs": r * w, "rhs": 2 * m},
    }
    if r <= m / 2:
        case = "case1"
        need = m / 2 + 56 * t * sq
        w_lower = sq / (14 * t) + 8
        checks["case1"] = {"holds": D >= need, "D": D, "bound": need, "w_prime": w, "w_lower": w_lower, "w_lower_holds": w >= w_lower}
    elif r <= m:
        case = "case2"
        need = 56 * t * sq
        w_upper = 2 * m / r
        checks["case2"] = {
            "holds": D >= need,
            "D": D,
            "bound": need,
            "w_prime": w,
            "w_lower_holds": w >= 8,
            "w_upper": w_upper,
            "w_upper_holds": w <= w_upper,
            "clash": w_upper < 8,
        }
    else:
        case = "beyond"

    premises = ("observation", "degree_cap", "unused_both_sides_bound", "degree_sum")
    failing = [k for k in premises if not checks[k]["holds"]]
    if case in checks and not checks[case]["holds"]:
        failing.append(case)
    contradiction = case == "case2" and not failing and checks["case2"]["clash"]
    out = {
        "case": case,
        "r": r,
        "w_prime": w,
        "D": D,
        "below_threshold": c.n_host < config.host_size,
        "host_size": config.host_size,
        "checks": checks,
        "failing_premises": failing,
        "contradiction_realized": contradiction,
    }
    log.info(f"[EMBED] diagnostics: {case}, failing={failing}")
    return out


# =======================
# Dense-subgraph cycle finder
# =======================
def _lift_cycle(cycle: Sequence[Vertex], left_ids: Sequence[int], right_ids: Sequence[int], swapped: bool) -> List[Vertex]:
    """Relabel a cycle found in a subgraph back to host indices; ``swapped`` undoes a transpose."""
    out = [(s, left_ids[x] if s == LEFT else right_ids[x]) for s, x in cycle]
    if swapped:
        out = [(1 - s, x) for s, x in out]
        out = out[1:] + out[:1]
    return out


@dataclass
class LemmaOutcome:
    status: str
    witness: Optional[PatternWitness] = None
    average_degree: Optional[float] = None
    average_ok: Optional[bool] = None
    swapped: bool = False
    searched_full: bool = False

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "average_degree": self.average_degree,
            "average_ok": self.average_ok,
            "swapped": self.swapped,
            "searched_full": self.searched_full,
        }


def find_cycle_via_lemma(h: BipartiteGraph, t: int, m: int) -> LemmaOutcome:
    """
    C_{2t} in a graph with parts |X| >= sqrt(m), |Y| >= 2m and at least
    6t sqrt(m) edges, trying X = left first and then X = right.

    X' = floor(sqrt(m)) highest-degree vertices of X, Y' = the 2m vertices of Y
    with most neighbours in X' (ties by index); the search runs on X' x Y'
    first and on all of ``h`` if that fails.
    """
    cfg = EmbedConfig(t=t, m=m)
    sq = cfg.sqrt_m
    if not _at_least(h.edge_count, cfg.lemma_threshold):
        return LemmaOutcome(NOT_APPLICABLE)
    for swapped, hh in ((False, h), (True, h.transpose())):
        X, Y = hh.left_size, hh.right_size
        if not (_at_least(X, sq) and Y >= 2 * m):
            continue
        x_size = math.isqrt(m)
        xs = sorted(range(X), key=lambda u: (-hh.degree(LEFT, u), u))[:x_size]
        x_mask = mask_of(xs)
        ys = sorted(range(Y), key=lambda v: (-(hh.columns[v] & x_mask).bit_count(), v))[: 2 * m]
        sub = hh.induced(sorted(xs), sorted(ys))
        avg = sub.edge_count / max(1, sub.left_size)
        ok = _at_least(avg, 3 * t)
        if not ok:
            log.warning(f"[EMBED] greedy selection reaches average degree {avg:.3g} < {3 * t}")
        w = find_even_cycle(sub, 2 * t)
        if w is not None:
            cycle = _lift_cycle(w.cycle, sorted(xs), sorted(ys), swapped)
            return LemmaOutcome(FOUND, PatternWitness(CYCLE, cycle=cycle), avg, ok, swapped)
        w = find_even_cycle(hh, 2 * t)
        if w is not None:
            cycle = _lift_cycle(w.cycle, range(X), range(Y), swapped)
            return LemmaOutcome(FOUND, PatternWitness(CYCLE, cycle=cycle), avg, ok, swapped, True)
        return LemmaOutcome(NO_CYCLE, None, avg, ok, swapped, True)
    return LemmaOutcome(NOT_APPLICABLE)


# =======================
# Pipeline
# =======================
@dataclass
class PipelineReport:
    status: str
    n_host: int
    host_size: int
    below_threshold: bool
    target_connected: bool
    w0: HighDegreeSet
    config: EmbedConfig
    phase1: dict = field(default_factory=dict)
    lemma: Optional[LemmaOutcome] = None
    red_cycle: Optional[PatternWitness] = None
    embedding: Optional[Embedding] = None
    stuck: Optional[StuckReport] = None
    diagnostics: Optional[dict] = None
    structural_reason: Optional[str] = None

    @property
    def embedded(self) -> bool:
        return self.status == EMBEDDED

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "N": self.n_host,
            "host_size": self.host_size,
            "below_threshold": self.below_threshold,
            "target_connected": self.target_connected,
            "config": self.config.to_json(),
            "w0": self.w0.to_json(),
            "phase1": self.phase1,
            "lemma": self.lemma.to_json() if self.lemma is not None else None,
            "red_cycle": self.red_cycle.to_json() if self.red_cycle is not None else None,
            "embedding": self.embedding.to_json() if self.embedding is not None else None,
            "stuck": self.stuck.to_json() if self.stuck is not None else None,
            "diagnostics": self.diagnostics,
            "structural_reason": self.structural_reason,
        }


def _red_cycle_step(c: EdgeColoring, w0: HighDegreeSet, config: EmbedConfig) -> LemmaOutcome:
    """Red graph between W0's larger side and the whole opposite side."""
    red = c.color_class(RED)
    ys = list(range(c.n_host))
    swapped = len(w0.right) > len(w0.left)
    xs = w0.right if swapped else w0.left
    h = red.transpose() if swapped else red
    outcome = find_cycle_via_lemma(h.induced(xs, ys), config.t, config.m)
    if outcome.found:
        outcome.witness = PatternWitness(CYCLE, cycle=_lift_cycle(outcome.witness.cycle, xs, ys, swapped))
        if not outcome.witness.verify(red):
            raise AssertionError("red cycle witness fails re-verification")
    return outcome


def _phase1(c: EdgeColoring, g: BipartiteGraph, config: EmbedConfig, allowed: Tuple[int, int]) -> Tuple[dict, Optional[Dict[Vertex, int]]]:
    a = min(config.phase1_side, g.left_size, g.right_size)
    info = {"attempted": True, "side": a, "outcome": None}
    if a < 1:
        info["outcome"] = "skipped"
        return info, None
    left_ids = list(iter_bits(allowed[LEFT]))
    right_ids = list(iter_bits(allowed[RIGHT]))
    blue = c.color_class(c.blue).induced(left_ids, right_ids)
    try:
        w = find_biclique(blue, a, node_limit=config.phase1_node_budget)
    except ResourceLimitError:
        log.warning(f"[EMBED] phase-1 search for a blue K{a},{a} ran out of budget; using plain greedy")
        info["outcome"] = "budget"
        return info, None
    if w is None:
        log.warning(f"[EMBED] no blue K{a},{a} in the pruned host; using plain greedy")
        info["outcome"] = "no-biclique"
        return info, None
    top_left = sorted(range(g.left_size), key=lambda u: (-g.degree(LEFT, u), u))[:a]
    top_right = sorted(range(g.right_size), key=lambda v: (-g.degree(RIGHT, v), v))[:a]
    pre: Dict[Vertex, int] = {}
    for u, x in zip(top_left, w.left):
        pre[(LEFT, u)] = left_ids[x]
    for v, y in zip(top_right, w.right):
        pre[(RIGHT, v)] = right_ids[y]
    info["outcome"] = "biclique"
    info["biclique"] = {"left": [left_ids[x] for x in w.left], "right": [right_ids[y] for y in w.right]}
    return info, pre


def embed_pipeline(c: EdgeColoring, g: BipartiteGraph, t: int, config: Optional[EmbedConfig] = None) -> PipelineReport:
    """Run the four stages and return what happened; never raises for a stuck or structural outcome."""
    _check_two_colors(c)
    config = config or EmbedConfig.from_target(g, t)
    check_target(g)
    if config.m != g.edge_count or config.t != t:
        raise DomainError(f"config is for m={config.m}, t={config.t}; target has m={g.edge_count}, t={t}")

    w0 = high_red_degree_set(c, t, config.m)
    report = PipelineReport(
        status=STUCK,
        n_host=c.n_host,
        host_size=config.host_size,
        below_threshold=c.n_host < config.host_size,
        target_connected=g.is_connected(),
        w0=w0,
        config=config,
        phase1={"attempted": False},
    )
    if report.below_threshold:
        log.warning(f"[EMBED] host side {c.n_host} is below host_size(m={config.m}, t={t}) = {config.host_size}")

    if w0.large:
        report.lemma = _red_cycle_step(c, w0, config)
        if report.lemma.found:
            log.info(f"[EMBED] |W0| = {w0.size} >= sqrt(m): red C{2 * t} found")
            report.status = RED_CYCLE
            report.red_cycle = report.lemma.witness
            return report
        log.warning(f"[EMBED] |W0| = {w0.size} >= sqrt(m) but no red C{2 * t} found ({report.lemma.status})")

    allowed = w0.allowed(c.n_host) if config.prune else ((1 << c.n_host) - 1,) * 2
    pre = None
    if config.phase1:
        report.phase1, pre = _phase1(c, g, config, allowed)

    res = None
    if pre:
        try:
            res = greedy_blue_embed(c, g, config, pre)
        except StructuralFailure:
            res = None
        if not isinstance(res, Embedding):
            log.info("[EMBED] phase-1 placement did not extend; retrying plain greedy")
            report.phase1["outcome"] = "stuck-then-greedy"
            res = None
    if res is None:
        try:
            res = greedy_blue_embed(c, g, config)
        except StructuralFailure as e:
            log.warning(f"[EMBED] structural failure: {e}")
            report.status = STRUCTURAL
            report.structural_reason = str(e)
            return report

    if isinstance(res, Embedding):
        if not res.verify(c, g):
            raise AssertionError("greedy embedding fails re-verification")
        report.status = EMBEDDED
        report.embedding = res
        return report
    report.stuck = res
    report.diagnostics = stuck_diagnostics(res, c, config)
    return report

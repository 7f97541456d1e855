"""
Double-counting upper bounds for br_k(C_{2t}; K_{n,n}).

In a (k+1)-coloring of K_{r,r} with no C_{2t} in the first k colors and no
K_{n,n} in the last, every edge receives exactly one color, so

    r^2 <= k * z(r; C_{2t}) + z(r; n).

Whenever the right-hand side is < r^2 no such coloring exists and
br_k(C_{2t}; K_{n,n}) <= r. ``exact`` mode uses searched Zarankiewicz
numbers, ``bound`` mode the two closed-form upper bounds.

Logarithms are natural throughout.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional

from core.certificate import COUNTING_UPPER_BOUND, Certificate, make_meta
from core.errors import DomainError

from ..partition import SearchBudget
from ..zarankiewicz.extremal import bollobas_bound, naor_verstraete_bound, z_cycle_exact, z_exact

log = logging.getLogger(__name__)

EXACT = "exact"
BOUND = "bound"

CERTIFIED = "certified"
NOT_CERTIFIED = "not-certified"
INDETERMINATE = "indeterminate"


@dataclass
class CountingConfig:
    n: int
    t: int = 2
    k: int = 1
    c: float = 1.0
    mode: str = EXACT

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"biclique side must be >= 1, got {self.n}")
        if self.t < 2:
            raise DomainError(f"cycle half-length must be >= 2, got {self.t}")
        if self.k < 1:
            raise DomainError(f"need at least one cycle color, got {self.k}")
        if not self.c > 0:
            raise DomainError(f"constant c must be positive, got {self.c}")
        if self.mode not in (EXACT, BOUND):
            raise DomainError(f"mode must be {EXACT!r} or {BOUND!r}, got {self.mode!r}")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class CountingResult:
    cfg: CountingConfig
    r: int
    status: str
    lhs: float
    rhs: int
    z_cycle: Optional[float] = None
    z_biclique: Optional[float] = None

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def claim(self) -> str:
        cfg = self.cfg
        return f"br_{cfg.k}(C{2 * cfg.t};K{cfg.n},{cfg.n}) <= {self.r}"

    def to_json(self) -> dict:
        return {
            "cfg": self.cfg.to_json(),
            "r": self.r,
            "mode": self.cfg.mode,
            "status": self.status,
            "certified": self.certified,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "z_cycle": self.z_cycle,
            "z_biclique": self.z_biclique,
        }

    def certificate(self, seed: Optional[int] = None, stamp: bool = False) -> Optional[Certificate]:
        if not self.certified:
            return None
        cfg = self.cfg
        claims = [
            f"{cfg.k}*z({self.r};C{2 * cfg.t}) + z({self.r};{cfg.n}) <= {self.lhs} < {self.rhs} = {self.r}^2",
            self.claim(),
        ]
        return Certificate(COUNTING_UPPER_BOUND, claims, self.to_json(), make_meta(seed=seed, stamp=stamp))


# =======================
# Certifier
# =======================
def certify_upper_bound(cfg: CountingConfig, r: int, budget: Optional[SearchBudget] = None, cache=None) -> CountingResult:
    """
    Evaluate k * z(r; C_{2t}) + z(r; n) < r^2.

    :param budget: Zarankiewicz search budget (exact mode only)
    :param cache: optional extremal-record store (exact mode only)
    """
    if r < 1:
        raise DomainError(f"host side must be >= 1, got {r}")
    rhs = r * r
    if cfg.mode == EXACT:
        zc = z_cycle_exact(r, cfg.t, budget, cache)
        zb = z_exact(r, cfg.n, budget, cache)
        lhs = cfg.k * zc.value + zb.value
        if not (zc.exhausted and zb.exhausted):
            # values are only lower bounds; lhs < rhs would prove nothing
            status = INDETERMINATE
        else:
            status = CERTIFIED if lhs < rhs else NOT_CERTIFIED
        res = CountingResult(cfg, r, status, lhs, rhs, zc.value, zb.value)
    else:
        if not (r >= cfg.n >= 2):
            raise DomainError(f"bound mode needs r >= n >= 2, got r={r}, n={cfg.n}")
        zc = naor_verstraete_bound(r, cfg.t)
        zb = bollobas_bound(r, cfg.n)
        lhs = cfg.k * zc + zb
        res = CountingResult(cfg, r, CERTIFIED if lhs < rhs else NOT_CERTIFIED, lhs, rhs, zc, zb)
    log.info(f"[COUNT] r={r} mode={cfg.mode} lhs={res.lhs} rhs={rhs} -> {res.status}")
    return res


def smallest_certified_r(cfg: CountingConfig, r_max: int, budget: Optional[SearchBudget] = None, cache=None) -> Optional[CountingResult]:
    """
    Least r <= r_max whose counting inequality certifies, scanning upward.

    Bound mode starts at r = n (the bound's hypothesis). Returns None when no
    r in range qualifies; an indeterminate step stops the scan and is returned.
    """
    start = cfg.n if cfg.mode == BOUND else 1
    if cfg.mode == BOUND and cfg.n < 2:
        raise DomainError(f"bound mode needs n >= 2, got {cfg.n}")
    for r in range(start, r_max + 1):
        res = certify_upper_bound(cfg, r, budget, cache)
        if res.status != NOT_CERTIFIED:
            return res
    return None


# =======================
# Asymptotics
# =======================
def asymptotic_r(n: int, c: float) -> int:
    """ceil(c n^2 / ln^2 n)."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if not c > 0:
        raise DomainError(f"constant c must be positive, got {c}")
    ln = math.log(n)
    return math.ceil(c * n * n / (ln * ln))


def ratio_margin(cfg: CountingConfig) -> float:
    """
    1 - (k * naor_verstraete(r, t) + bollobas(r, n)) / r^2 at r = asymptotic_r(n, c).

    Positive means the bound-mode inequality certifies br_k(C_{2t}; K_{n,n}) <= r.
    """
    if cfg.mode != BOUND:
        raise DomainError("ratio margin is defined for bound mode only")
    r = asymptotic_r(cfg.n, cfg.c)
    if r < cfg.n:
        raise DomainError(f"r = {r} is below n = {cfg.n}; increase n or c")
    total = cfg.k * naor_verstraete_bound(r, cfg.t) + bollobas_bound(r, cfg.n)
    return 1.0 - total / (float(r) * float(r))


def margin_sweep(t: int, k: int, c: float, n_values: Iterable[int]) -> List[dict]:
    """Ratio margins over ``n_values``; entries where r < n report the domain error instead."""
    rows = []
    for n in n_values:
        cfg = CountingConfig(n=n, t=t, k=k, c=c, mode=BOUND)
        try:
            rows.append({"n": n, "r": asymptotic_r(n, c), "margin": ratio_margin(cfg)})
        except DomainError as e:
            rows.append({"n": n, "r": None, "margin": None, "error": str(e)})
    return rows


def first_positive_margin(t: int, k: int, c: float, n_values: Iterable[int]) -> Optional[int]:
    for row in margin_sweep(t, k, c, sorted(n_values)):
        if row["margin"] is not None and row["margin"] > 0:
            return row["n"]
    return None


# =======================
# Size-linearity
# =======================
def size_linearity_obstruction(p: int, q: int) -> bool:
    """True iff p >= 3 and q >= 2p - 2: then G is not bipartite Ramsey size-linear."""
    if p < 1 or q < 0:
        raise DomainError(f"need p >= 1 and q >= 0, got p={p}, q={q}")
    return p >= 3 and q >= 2 * p - 2


def lower_bound_exponent(p: int, q: int) -> float:
    """(q-1)/(p-2): br(G, K_{n,n}) grows at least like (n / log n)^{this}."""
    if p < 3 or q < 2:
        raise DomainError(f"need p >= 3 and q >= 2, got p={p}, q={q}")
    return (q - 1) / (p - 2)

"""
Local Lemma bookkeeping for lower bounds on br(G, K_{n,n}).

Random model: each edge of K_{N,N} is red with probability r = c1 N^{-s},
s = (p-2)/(q-1), where G has p vertices and q edges. Bad events are
A_S (a red copy of G on the p-set S) and B_T (a blue K_{n,n} on the 2n-set T)
with n = c2 N^s ln N. Two events depend iff their vertex sets share at least
two vertices. Coefficients a = 2 and b = exp(C4 N^s ln^2 N).

All probabilities live in log space (natural log). Dependency counts are exact
big integers while they stay under a digit budget, and pass through
``math.lgamma`` beyond it.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional

from core.errors import DomainError

log = logging.getLogger(__name__)

LOG_A = math.log(2.0)
LOG_HALF = -math.log(2.0)
EXACT_DIGITS = 4000

APPLICABLE = "applicable"
INAPPLICABLE = "inapplicable"


# =======================
# Parameters
# =======================
@dataclass(frozen=True)
class LLLParameters:
    """
    :param p: pattern vertex count
    :param q: pattern edge count
    :param N: host side
    ``red_prob`` is clamped to 1 (``clamped`` records it); ``n_int = ceil(n)``
    is the biclique side the events are built on.
    """

    p: int
    q: int
    c1: float
    c2: float
    C4: float
    N: int
    s: float
    red_prob: float
    clamped: bool
    n: float
    n_int: int
    a: float
    log_b: float

    def to_json(self) -> dict:
        return asdict(self)


def derive_params(p: int, q: int, c1: float, c2: float, C4: float, N: int) -> LLLParameters:
    if p < 3 or q < 2:
        raise DomainError(f"need p >= 3 and q >= 2 for a finite positive s, got p={p}, q={q}")
    if N < 2:
        raise DomainError(f"host side must be >= 2, got {N}")
    if not (c1 > 0 and c2 > 0 and C4 > 0):
        raise DomainError(f"constants must be positive, got c1={c1}, c2={c2}, C4={C4}")
    s = (p - 2) / (q - 1)
    ln_n = math.log(N)
    n_s = float(N) ** s
    raw = c1 / n_s
    clamped = raw > 1.0
    if clamped:
        log.warning(f"[LLL] red probability {raw:.4g} exceeds 1 at N={N}; clamped")
    n = c2 * n_s * ln_n
    return LLLParameters(
        p=p,
        q=q,
        c1=c1,
        c2=c2,
        C4=C4,
        N=N,
        s=s,
        red_prob=min(raw, 1.0),
        clamped=clamped,
        n=n,
        n_int=max(1, math.ceil(n)),
        a=2.0,
        log_b=C4 * n_s * ln_n * ln_n,
    )


def implied_host_side(p: int, q: int, n: float, c2: float) -> int:
    """
    Largest N >= 1 with c2 N^s ln N <= n: a good coloring of K_{N,N} at these
    parameters shows br(G, K_{n,n}) > N.
    """
    if p < 3 or q < 2:
        raise DomainError(f"need p >= 3 and q >= 2, got p={p}, q={q}")
    if not c2 > 0 or not n > 0:
        raise DomainError(f"need positive n and c2, got n={n}, c2={c2}")
    s = (p - 2) / (q - 1)

    def fits(N: int) -> bool:
        return c2 * float(N) ** s * math.log(N) <= n

    lo, hi = 1, 2
    while fits(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fits(mid):
            lo = mid
        else:
            hi = mid
    return lo


# =======================
# Probabilities
# =======================
def log_prob_red(params: LLLParameters) -> float:
    """ln(p!) + q ln r: log of the bound P(A_S) <= p! r^q."""
    if params.red_prob <= 0:
        return -math.inf
    return math.lgamma(params.p + 1) + params.q * math.log(params.red_prob)


def log_prob_blue(params: LLLParameters, n: Optional[float] = None) -> float:
    """
    n ln 4 - r n^2: log of the bound P(B_T) <= 4^n exp(-r n^2).

    :param n: biclique side; defaults to the real-valued ``params.n``
    """
    n = params.n if n is None else n
    if n < 1:
        raise DomainError(f"biclique side must be >= 1, got {n}")
    return n * math.log(4.0) - params.red_prob * n * n


# =======================
# Dependency counts
# =======================
@dataclass(frozen=True)
class DependencyCounts:
    N_AA: int
    N_AB: int
    N_BA: int
    N_BB: int

    def to_json(self) -> dict:
        return {k: str(v) for k, v in asdict(self).items()}


def _check_counts_domain(p: int, n: int, N: int):
    if not 2 <= p <= 2 * N:
        raise DomainError(f"need 2 <= p <= 2N, got p={p}, N={N}")
    if not 1 <= n <= N:
        raise DomainError(f"need 1 <= n <= N, got n={n}, N={N}")


def _overlap_sum(size: int, total: int) -> int:
    """sum_{k=2}^{size-1} C(size, k) C(total - size, size - k)."""
    return sum(math.comb(size, k) * math.comb(total - size, size - k) for k in range(2, size))


def dependency_counts(p: int, n: int, N: int) -> DependencyCounts:
    """Exact counts of events depending on a fixed A_S (N_AA, N_AB) or B_T (N_BA, N_BB)."""
    _check_counts_domain(p, n, N)
    V = 2 * N
    return DependencyCounts(
        N_AA=_overlap_sum(p, V),
        N_AB=math.comb(p, 2) * math.comb(V - 2, 2 * n - 2),
        N_BA=math.comb(2 * n, 2) * math.comb(V - 2, p - 2),
        N_BB=_overlap_sum(2 * n, V),
    )


def _log_comb(a: int, b: int) -> float:
    if b < 0 or b > a:
        return -math.inf
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def _log_sub(log_x: float, log_y: float) -> float:
    """ln(x - y) for 0 <= y < x."""
    if log_y == -math.inf:
        return log_x
    d = log_y - log_x
    if d < LOG_HALF:
        return log_x + math.log1p(-math.exp(d))
    return log_x + math.log(-math.expm1(d))


def _log_overlap_direct(size: int, total: int) -> float:
    """Log-sum-exp of the k = 2..size-1 terms; they decrease in k when size^2 < total."""
    terms: List[float] = []
    for k in range(2, size):
        x = _log_comb(size, k) + _log_comb(total - size, size - k)
        terms.append(x)
        if x < terms[0] - 50:
            break
    return _log_sum(terms)


def _log_overlap(size: int, total: int) -> float:
    """ln of C(total,size) - C(total-size,size) - size*C(total-size,size-1) - 1, the telescoped overlap sum."""
    if size < 3:
        return -math.inf
    if size * size < total:
        # the telescoped difference cancels catastrophically here
        return _log_overlap_direct(size, total)
    head = _log_comb(total, size)
    rest = total - size
    parts = [_log_comb(rest, size), math.log(size) + _log_comb(rest, size - 1), 0.0]
    finite = [x for x in parts if x > -math.inf]
    top = max(finite)
    log_tail = top + math.log(sum(math.exp(x - top) for x in finite))
    if log_tail >= head:
        return -math.inf
    return _log_sub(head, log_tail)


def _log_int(x: int) -> float:
    return math.log(x) if x > 0 else -math.inf


def log_dependency_counts(p: int, n: int, N: int, digit_budget: int = EXACT_DIGITS) -> dict:
    """
    Natural logs of N_AA, N_AB, N_BA, N_BB (``-inf`` for a zero count).

    Uses exact integers when C(2N, max(p, 2n)) has at most ``digit_budget``
    digits, closed forms over ``math.lgamma`` otherwise.
    """
    _check_counts_domain(p, n, N)
    V = 2 * N
    exact = _log_comb(V, max(p, 2 * n)) / math.log(10) <= digit_budget
    if exact:
        c = dependency_counts(p, n, N)
        out = {"N_AA": _log_int(c.N_AA), "N_AB": _log_int(c.N_AB), "N_BA": _log_int(c.N_BA), "N_BB": _log_int(c.N_BB)}
    else:
        out = {
            "N_AA": _log_overlap(p, V),
            "N_AB": math.log(math.comb(p, 2)) + _log_comb(V - 2, 2 * n - 2),
            "N_BA": _log_comb(2 * n, 2) + _log_comb(V - 2, p - 2),
            "N_BB": _log_overlap(2 * n, V),
        }
    out["exact"] = exact
    return out


# =======================
# Conditions
# =======================
def check_constants(c1: float, c2: float, C4: float) -> dict:
    """Asymptotic constant check 2 c2 + C4 < c1 c2^2 / 2 (strict)."""
    if not (c1 > 0 and c2 > 0 and C4 > 0):
        raise DomainError(f"constants must be positive, got c1={c1}, c2={c2}, C4={C4}")
    lhs = 2 * c2 + C4
    rhs = c1 * c2 * c2 / 2
    return {"ok": lhs < rhs, "lhs": lhs, "rhs": rhs}


def _log_sum(terms: List[float]) -> float:
    finite = [x for x in terms if x > -math.inf]
    if not finite:
        return -math.inf
    top = max(finite)
    return top + math.log(sum(math.exp(x - top) for x in finite))


def _margin(log_coeff: float, log_rhs: float) -> float:
    """ln(coeff) - exp(log_rhs), with -inf once the right-hand side overflows a double."""
    if log_rhs > 700:
        return -math.inf
    return log_coeff - math.exp(log_rhs)


def _log_neg_log1m(log_x: float) -> float:
    """ln(-ln(1 - x)) for 0 <= x < 1, given ln x."""
    if log_x == -math.inf:
        return -math.inf
    if log_x < -30:
        return log_x
    return math.log(-_log_sub(0.0, log_x))


def check_lll_conditions(params: LLLParameters, original_conditions: bool = False, digit_budget: int = EXACT_DIGITS) -> dict:
    """
    Margins (lhs - rhs) of

        ln a >= 2 N_AA a P(A) + 2 N_AB b P(B)
        ln b >= 2 N_BA a P(A) + 2 N_BB b P(B)

    after checking a P(A) <= 1/2 and b P(B) <= 1/2. With ``original_conditions``
    the terms 2x are replaced by -ln(1-x) (needs only x < 1).

    Both margins positive means the Local Lemma hypotheses hold at this N.
    """
    out = {
        "params": params.to_json(),
        "status": INAPPLICABLE,
        "cond_a_margin": None,
        "cond_b_margin": None,
        "original_conditions": original_conditions,
    }
    if params.n_int > params.N:
        out["reason"] = f"n = {params.n_int} exceeds N = {params.N}"
        return out
    log_a = math.log(params.a)
    lx_a = log_a + log_prob_red(params)
    lx_b = params.log_b + log_prob_blue(params, params.n_int)
    out["log_x_a"], out["log_x_b"] = lx_a, lx_b
    cap = 0.0 if original_conditions else LOG_HALF
    if lx_a > cap or lx_b > cap or (original_conditions and (lx_a >= 0 or lx_b >= 0)):
        out["reason"] = "a P(A) or b P(B) too large for the simplified conditions" if not original_conditions else "a P(A) or b P(B) not below 1"
        return out

    counts = log_dependency_counts(params.p, params.n_int, params.N, digit_budget)
    if original_conditions:
        term_a, term_b = _log_neg_log1m(lx_a), _log_neg_log1m(lx_b)
    else:
        term_a, term_b = LOG_A + lx_a, LOG_A + lx_b
    log_rhs_a = _log_sum([counts["N_AA"] + term_a, counts["N_AB"] + term_b])
    log_rhs_b = _log_sum([counts["N_BA"] + term_a, counts["N_BB"] + term_b])
    out.update(
        status=APPLICABLE,
        cond_a_margin=_margin(log_a, log_rhs_a),
        cond_b_margin=_margin(params.log_b, log_rhs_b),
        log_rhs_a=log_rhs_a,
        log_rhs_b=log_rhs_b,
        counts_exact=counts["exact"],
    )
    out["verified"] = out["cond_a_margin"] > 0 and out["cond_b_margin"] > 0
    log.info(f"[LLL] N={params.N} margins a={out['cond_a_margin']:.6g} b={out['cond_b_margin']:.6g}")
    return out


def margin_sweep(p: int, q: int, c1: float, c2: float, C4: float, N_values: Iterable[int], original_conditions: bool = False) -> List[dict]:
    rows = []
    for N in N_values:
        res = check_lll_conditions(derive_params(p, q, c1, c2, C4, N), original_conditions)
        rows.append(
            {
                "N": N,
                "status": res["status"],
                "cond_a_margin": res["cond_a_margin"],
                "cond_b_margin": res["cond_b_margin"],
                "verified": res.get("verified", False),
            }
        )
    return rows


def geometric_range(lo: int, hi: int, factor: float = 10.0) -> List[int]:
    """lo, lo*factor, ... up to hi (inclusive when hit)."""
    if lo < 2 or hi < lo or factor <= 1:
        raise DomainError(f"need 2 <= lo <= hi and factor > 1, got lo={lo}, hi={hi}, factor={factor}")
    out, x = [], float(lo)
    while x <= hi * (1 + 1e-12):
        out.append(int(round(x)))
        x *= factor
    return out

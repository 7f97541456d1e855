"""
Independent certificate checker.

Each kind is re-checked from its payload alone with fresh searches or a
fresh evaluation of the inequality; nothing from the producing run is
trusted. Claims are rebuilt from the re-checked payload and must match the
certificate's claims verbatim, so a tampered claim is named in the report.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from bounds_layer.embedder.cycle_embedder import Embedding
from bounds_layer.lll.resampler import lower_bound_certificate
from bounds_layer.partition import SearchBudget
from bounds_layer.ramsey.counting import CountingConfig, CountingResult, certify_upper_bound
from bounds_layer.ramsey.exact_search import is_good_coloring, search_good_coloring
from bounds_layer.zarankiewicz.extremal import ExtremalRecord, z_search
from core.certificate import COUNTING_UPPER_BOUND, EMBEDDING, EXTREMAL_GRAPH, GOOD_COLORING, LLL_LOWER_BOUND, Certificate
from core.coloring import EdgeColoring
from core.errors import BrLabError
from core.graph import BipartiteGraph
from core.patterns import pattern_from_json

log = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    kind: str
    checks: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c["ok"] for c in self.checks)

    @property
    def failing(self) -> List[str]:
        return [c["claim"] for c in self.checks if not c["ok"]]

    def add(self, claim: str, ok: bool, reason: str = ""):
        self.checks.append({"claim": claim, "ok": bool(ok), "reason": reason})

    def to_json(self) -> dict:
        return {"kind": self.kind, "verified": self.ok, "checks": self.checks, "failing": self.failing}


def _match_claims(report: VerificationReport, cert: Certificate, expected: List[str], ok: Dict[str, Tuple[bool, str]]):
    """Record one check per certificate claim; claims the payload does not support fail."""
    for claim in cert.claims:
        if claim not in expected:
            report.add(claim, False, "claim does not follow from the payload")
            continue
        passed, reason = ok.get(claim, (True, ""))
        report.add(claim, passed, reason)
    for claim in expected:
        if claim not in cert.claims and ok.get(claim, (True, ""))[0] is False:
            report.add(claim, False, "required claim is missing")


# =======================
# Per-kind checkers
# =======================
def _check_good_coloring(cert: Certificate, report: VerificationReport, budget: Optional[SearchBudget]):
    p = cert.payload
    coloring = EdgeColoring.from_json(p["coloring"])
    patterns = [pattern_from_json(x) for x in p["patterns"]]
    n = coloring.n_host
    names = [pat.describe() for pat in patterns]
    ok: Dict[str, Tuple[bool, str]] = {}
    expected = []
    for i, (pat, name) in enumerate(zip(patterns, names)):
        claim = f"color class {i} of this coloring of K{n},{n} contains no {name}"
        expected.append(claim)
        w = pat.find(coloring.color_class(i))
        ok[claim] = (w is None, "" if w is None else f"found {w.to_json()}")
    bound = f"br({names[0]},{names[1]}) > {n}"
    expected.append(bound)
    ok[bound] = (p.get("N") == n and is_good_coloring(coloring, patterns), "")
    _match_claims(report, cert, expected, ok)

    ref = p.get("refutation")
    if ref is not None and budget is not None and ref["N"] <= budget.max_side:
        outcome = search_good_coloring(patterns, ref["N"], budget)
        report.add(f"no good coloring of K{ref['N']},{ref['N']}", outcome.exhausted, f"re-search status {outcome.status}")


def _check_extremal(cert: Certificate, report: VerificationReport, budget: Optional[SearchBudget]):
    record = ExtremalRecord.from_json(cert.payload)
    fresh = record.certificate()
    ok = {fresh.claims[0]: (record.verify(), "witness is not a valid forbidden-free graph with that many edges")}
    if len(fresh.claims) > 1:
        claim = fresh.claims[1]
        if budget is not None and record.r <= budget.max_side:
            again = z_search(record.r, record.pattern, budget)
            ok[claim] = (again.exhausted and again.value == record.value, f"re-search gives {again.value}")
        else:
            ok[claim] = (record.verify(), "exhaustive part not re-run")
    _match_claims(report, cert, fresh.claims, ok)


def _check_counting(cert: Certificate, report: VerificationReport, budget: Optional[SearchBudget]):
    p = cert.payload
    cfg = CountingConfig(**p["cfg"])
    res: CountingResult = certify_upper_bound(cfg, int(p["r"]), budget)
    fresh = res.certificate()
    if fresh is None:
        for claim in cert.claims:
            report.add(claim, False, f"re-evaluation: lhs={res.lhs} rhs={res.rhs} status={res.status}")
        return
    ok = {claim: (res.lhs == p.get("lhs") and res.rhs == p.get("rhs"), f"re-evaluation: lhs={res.lhs} rhs={res.rhs}") for claim in fresh.claims}
    _match_claims(report, cert, fresh.claims, ok)


def _check_lower_bound(cert: Certificate, report: VerificationReport, budget: Optional[SearchBudget]):
    p = cert.payload
    g = BipartiteGraph.from_json(p["pattern"])
    coloring = EdgeColoring.from_json(p["coloring"])
    fresh = lower_bound_certificate(g, int(p["n"]), coloring)
    if fresh is None or p.get("N") != coloring.n_host:
        for claim in cert.claims:
            report.add(claim, False, "coloring contains a red pattern or a blue biclique")
        return
    _match_claims(report, cert, fresh.claims, {})


def _check_embedding(cert: Certificate, report: VerificationReport, budget: Optional[SearchBudget]):
    p = cert.payload
    target = BipartiteGraph.from_json(p["target"])
    coloring = EdgeColoring.from_json(p["coloring"])
    emb = Embedding.from_json(p["embedding"])
    good = emb.verify(coloring, target)
    N = coloring.n_host
    expected = [
        f"target with {target.edge_count} edges embeds in the blue class of this coloring of K{N},{N}",
        "every target edge maps to a blue host edge",
    ]
    _match_claims(report, cert, expected, {c: (good, "embedding is not injective or uses a red edge") for c in expected})


CHECKERS: Dict[str, Callable] = {
    GOOD_COLORING: _check_good_coloring,
    EXTREMAL_GRAPH: _check_extremal,
    COUNTING_UPPER_BOUND: _check_counting,
    LLL_LOWER_BOUND: _check_lower_bound,
    EMBEDDING: _check_embedding,
}


def verify_certificate(cert: Certificate, budget: Optional[SearchBudget] = None) -> VerificationReport:
    """
    :param budget: when given, exhaustive claims (refutations, extremality) are
                   re-searched up to ``budget.max_side``
    """
    report = VerificationReport(cert.kind)
    try:
        CHECKERS[cert.kind](cert, report, budget)
    except (KeyError, TypeError, ValueError, BrLabError) as e:
        report.add("payload", False, f"payload does not parse: {e}")
    if not report.checks:
        report.add("claims", False, "certificate states no claims")
    log.info(f"[VERIFY] {cert.kind}: {'ok' if report.ok else 'FAILED ' + '; '.join(report.failing)}")
    return report

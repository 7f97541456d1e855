import numpy as np
import pytest

from bounds_layer.embedder.cycle_embedder import embed_pipeline, host_size
from bounds_layer.lll.resampler import lower_bound_certificate
from bounds_layer.partition import SearchBudget
from bounds_layer.ramsey.counting import CountingConfig, certify_upper_bound
from bounds_layer.ramsey.exact_search import br_exact
from bounds_layer.zarankiewicz.extremal import z_exact
from core.certificate import Certificate, decode_certificate
from core.coloring import EdgeColoring
from core.graph import complete_bipartite, path_graph, perfect_matching, random_tree
from integration.verifier import verify_certificate


def tampered(cert, claims=None, payload=None):
    return Certificate(cert.kind, claims if claims is not None else list(cert.claims), payload if payload is not None else dict(cert.payload), dict(cert.meta))


@pytest.fixture(scope="module")
def certificates():
    rng = np.random.default_rng(1234)
    budget = SearchBudget(max_side=6)
    p3, k22 = path_graph(2), complete_bipartite(2, 2)
    g = random_tree(9, rng)
    c = EdgeColoring.random_matching_coloring(host_size(9, 2), rng)
    report = embed_pipeline(c, g, 2)
    return {
        "good-coloring": br_exact(p3, p3, budget).certificate(seed=0),
        "extremal-graph": z_exact(3, 2, budget).certificate(),
        "counting-upper-bound": certify_upper_bound(CountingConfig(n=2), 5, budget).certificate(),
        "lll-lower-bound": lower_bound_certificate(k22, 2, EdgeColoring.from_red_graph(perfect_matching(2))),
        "embedding": report.embedding.certificate(c, g, 2),
    }


@pytest.mark.parametrize("kind", ["good-coloring", "extremal-graph", "counting-upper-bound", "lll-lower-bound", "embedding"])
def test_every_kind_verifies(certificates, kind, budget):
    cert = certificates[kind]
    assert cert.kind == kind
    report = verify_certificate(cert)
    assert report.ok, report.failing
    assert verify_certificate(decode_certificate(cert.canonical()), budget).ok


@pytest.mark.parametrize("kind", ["good-coloring", "extremal-graph", "counting-upper-bound", "lll-lower-bound", "embedding"])
def test_invented_claim_is_named(certificates, kind):
    cert = certificates[kind]
    bad = tampered(cert, claims=cert.claims + ["br(K9,9,K9,9) > 1000"])
    report = verify_certificate(bad)
    assert not report.ok
    assert report.failing == ["br(K9,9,K9,9) > 1000"]


def test_refutation_is_rechecked(certificates, budget):
    cert = certificates["good-coloring"]
    report = verify_certificate(cert, budget)
    assert report.ok
    assert report.checks[-1]["claim"] == "no good coloring of K3,3"


def test_overstated_extremal_value_fails(certificates):
    cert = certificates["extremal-graph"]
    payload = dict(cert.payload, value=7)
    report = verify_certificate(tampered(cert, payload=payload))
    assert not report.ok


def test_counting_with_wrong_totals_fails(certificates):
    cert = certificates["counting-upper-bound"]
    report = verify_certificate(tampered(cert, payload=dict(cert.payload, lhs=20)))
    assert not report.ok


def test_bad_coloring_fails(certificates):
    cert = certificates["lll-lower-bound"]
    payload = dict(cert.payload, coloring=EdgeColoring.constant(2, 2, 0).to_json())
    report = verify_certificate(tampered(cert, payload=payload))
    assert not report.ok
    assert len(report.failing) == len(cert.claims)


def test_malformed_payload_is_reported(certificates):
    cert = certificates["embedding"]
    payload = dict(cert.payload)
    del payload["embedding"]
    report = verify_certificate(tampered(cert, payload=payload))
    assert not report.ok
    assert report.failing == ["payload"]


def test_empty_claims_fail(certificates):
    cert = certificates["lll-lower-bound"]
    report = verify_certificate(tampered(cert, claims=[]))
    assert not report.ok

import itertools

import pytest

from bounds_layer.partition import FOUND, INDETERMINATE, NONE, SearchBudget
from bounds_layer.ramsey.exact_search import (
    br_exact,
    exists_good_coloring,
    exists_good_coloring_multi,
    is_good_coloring,
    search_good_coloring,
)
from core.coloring import EdgeColoring
from core.errors import DomainError, ResourceLimitError
from core.graph import complete_bipartite
from core.patterns import as_pattern


def least_good_coloring(patterns, n):
    # edge-major order, red < blue: itertools.product already walks that order
    for cells in itertools.product(range(len(patterns)), repeat=n * n):
        c = EdgeColoring(n, len(patterns), list(cells))
        if is_good_coloring(c, patterns):
            return c
    return None


def test_k22_good_coloring_at_four(k22, budget):
    outcome = exists_good_coloring(k22, k22, 4, budget)
    assert outcome.status == FOUND
    assert is_good_coloring(outcome.coloring, [as_pattern(k22), as_pattern(k22)])


@pytest.mark.slow
def test_k22_none_at_five(k22, budget):
    outcome = exists_good_coloring(k22, k22, 5, budget)
    assert outcome.status == NONE
    assert outcome.exhausted


def test_single_edge_is_always_monochromatic(budget):
    k11 = complete_bipartite(1, 1)
    assert exists_good_coloring(k11, k11, 1, budget).status == NONE
    result = br_exact(k11, k11, budget)
    assert result.determined
    assert result.value == 1


def test_two_edge_path(p3, budget):
    result = br_exact(p3, p3, budget)
    assert result.value == 3
    assert result.witness.n_host == 2
    # both classes are perfect matchings
    left, right = result.witness.red_degrees()
    assert list(left) == [1, 1]
    assert list(right) == [1, 1]


@pytest.mark.slow
def test_k22_ramsey_number(k22):
    result = br_exact(k22, k22, SearchBudget(max_side=6, workers=4))
    assert result.value == 5
    assert result.witness.n_host == 4
    assert result.refutation() == {"N": 5, "nodes_explored": result.outcomes[-1].nodes_explored, "exhausted": True}
    cert = result.certificate(seed=0)
    assert cert.claims[-1] == "br(K2,2,K2,2) > 4"


def test_witness_is_lexicographically_least(p3, k22, budget):
    for g1, g2, n in [(p3, p3, 2), (k22, p3, 2), (p3, k22, 2)]:
        patterns = [as_pattern(g1), as_pattern(g2)]
        outcome = search_good_coloring(patterns, n, budget)
        assert outcome.coloring == least_good_coloring(patterns, n)


def test_color_swap_symmetry(p3, budget):
    k11 = complete_bipartite(1, 1)
    assert br_exact(k11, p3, budget).value == br_exact(p3, k11, budget).value == 2


def test_restriction_stays_good(k22, budget):
    patterns = [as_pattern(k22), as_pattern(k22)]
    c = search_good_coloring(patterns, 4, budget).coloring
    for n in range(1, 4):
        assert is_good_coloring(c.restrict(n), patterns)


def test_worker_count_does_not_change_result(k22):
    one = exists_good_coloring(k22, k22, 4, SearchBudget(max_side=6, workers=1))
    four = exists_good_coloring(k22, k22, 4, SearchBudget(max_side=6, workers=4))
    assert one.status == four.status == FOUND
    assert one.coloring == four.coloring
    assert one.nodes_explored == four.nodes_explored


def test_multicolor_searches(budget):
    three = exists_good_coloring_multi(2, 2, 2, 2, budget)
    assert three.status == FOUND
    assert three.coloring.num_colors == 3
    assert exists_good_coloring_multi(2, 1, 2, 4, budget).status == FOUND


@pytest.mark.slow
def test_multicolor_matches_two_color_refutation(budget):
    assert exists_good_coloring_multi(2, 1, 2, 5, budget).status == NONE


def test_budget_exhaustion_is_indeterminate(k22):
    result = br_exact(k22, k22, SearchBudget(max_side=6, node_limit=1))
    assert result.status == INDETERMINATE
    assert result.value is None
    assert result.certificate() is None
    capped = br_exact(k22, k22, SearchBudget(max_side=3))
    assert capped.status == INDETERMINATE


def test_arguments_are_checked(k22):
    with pytest.raises(ResourceLimitError):
        exists_good_coloring(k22, k22, 7, SearchBudget(max_side=6))
    with pytest.raises(DomainError):
        exists_good_coloring_multi(1, 1, 2, 2, SearchBudget())
    with pytest.raises(DomainError):
        exists_good_coloring_multi(2, 0, 2, 2, SearchBudget())

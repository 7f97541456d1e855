import itertools

import networkx as nx
import numpy as np
import pytest

from core.errors import ResourceLimitError
from core.graph import BipartiteGraph, complete_bipartite, even_cycle_graph, path_graph, perfect_matching, random_tree
from core.patterns import (
    BicliquePattern,
    CyclePattern,
    GraphPattern,
    PatternWitness,
    as_pattern,
    find_biclique,
    find_even_cycle,
    find_subgraph_copy,
    pattern_from_json,
)
from tests.conftest import random_graph


def brute_force_biclique(g, s):
    for left in itertools.combinations(range(g.left_size), s):
        for right in itertools.combinations(range(g.right_size), s):
            if all(g.has_edge(u, v) for u in left for v in right):
                return list(left), list(right)
    return None


def has_copy(host, pattern):
    # connected patterns only: any monomorphism then respects the bipartition up to one flip
    matcher = nx.algorithms.isomorphism.GraphMatcher(host.to_networkx(), pattern.to_networkx())
    return matcher.subgraph_is_monomorphic()


# =======================
# Bicliques
# =======================
def test_biclique_in_k22(k22):
    w = find_biclique(k22, 2)
    assert (w.left, w.right) == ([0, 1], [0, 1])
    assert w.verify(k22)


def test_no_biclique_in_matching_or_six_cycle():
    assert find_biclique(perfect_matching(3), 2) is None
    assert find_biclique(even_cycle_graph(6), 2) is None


def test_biclique_is_lexicographically_least(rng):
    for _ in range(60):
        g = random_graph(rng, 5, 5, 0.6)
        for s in (1, 2, 3):
            w = find_biclique(g, s)
            expected = brute_force_biclique(g, s)
            if expected is None:
                assert w is None
            else:
                assert (w.left, w.right) == expected
                assert w.verify(g)


def test_biclique_node_limit_raises():
    with pytest.raises(ResourceLimitError) as err:
        find_biclique(complete_bipartite(6, 6), 3, node_limit=2)
    assert err.value.flag == "--node-limit"


# =======================
# Even cycles
# =======================
def test_cycles_in_complete_graphs(k22):
    w = find_even_cycle(k22, 4)
    assert len(w.cycle) == 4
    assert w.verify(k22)
    k33 = complete_bipartite(3, 3)
    w6 = find_even_cycle(k33, 6)
    assert len(w6.cycle) == 6
    assert w6.verify(k33)


def test_tree_has_no_cycle():
    g = random_tree(12, np.random.default_rng(5))
    for length in (4, 6, 8):
        assert find_even_cycle(g, length) is None


def test_cycle_length_is_exact():
    c6 = even_cycle_graph(6)
    assert find_even_cycle(c6, 4) is None
    assert find_even_cycle(c6, 6) is not None
    assert find_even_cycle(c6, 8) is None


@pytest.mark.parametrize("length", [3, 2, 7])
def test_bad_cycle_length(length):
    with pytest.raises(ValueError):
        find_even_cycle(complete_bipartite(2, 2), length)


def test_c4_and_k22_agree(rng):
    for _ in range(1000):
        left, right = (int(x) for x in rng.integers(1, 7, size=2))
        g = random_graph(rng, left, right, float(rng.uniform(0.2, 0.7)))
        assert (find_biclique(g, 2) is None) == (find_even_cycle(g, 4) is None)


def test_cycle_matches_networkx(rng):
    for _ in range(40):
        g = random_graph(rng, 4, 4, 0.5)
        for t in (2, 3, 4):
            expected = has_copy(g, even_cycle_graph(2 * t))
            w = find_even_cycle(g, 2 * t)
            assert (w is not None) == expected
            if w is not None:
                assert w.verify(g)


# =======================
# Generic copies
# =======================
def test_single_edge_and_path_copies():
    edge = BipartiteGraph.from_edges(1, 1, [(0, 0)])
    assert find_subgraph_copy(perfect_matching(2), edge) is not None
    c4 = even_cycle_graph(4)
    w = find_subgraph_copy(c4, path_graph(3))
    assert w is not None
    assert w.verify(c4)


def test_k22_not_in_six_cycle():
    assert find_subgraph_copy(even_cycle_graph(6), complete_bipartite(2, 2)) is None


def test_copy_may_flip_sides():
    # star with two leaves on the left fits only with its centre on the host's right
    star = BipartiteGraph.from_edges(2, 1, [(0, 0), (1, 0)])
    host = BipartiteGraph.from_edges(1, 2, [(0, 0), (0, 1)])
    w = find_subgraph_copy(host, star)
    assert w.flipped
    assert w.verify(host)


def test_isolated_pattern_vertices_are_dropped():
    pattern = BipartiteGraph.from_edges(2, 2, [(0, 0)])
    w = find_subgraph_copy(perfect_matching(1), pattern)
    assert w is not None
    assert None in w.left_map


def test_copies_match_networkx(rng):
    patterns = [path_graph(2), path_graph(3), path_graph(4), complete_bipartite(1, 3), even_cycle_graph(4)]
    for _ in range(30):
        host = random_graph(rng, 4, 4, 0.5)
        for p in patterns:
            w = find_subgraph_copy(host, p)
            assert (w is not None) == has_copy(host, p)
            if w is not None:
                assert w.verify(host)


def test_adding_an_edge_keeps_found(rng):
    for _ in range(30):
        g = random_graph(rng, 4, 4, 0.4)
        if find_subgraph_copy(g, path_graph(3)) is None:
            continue
        for u, v in itertools.product(range(4), range(4)):
            assert find_subgraph_copy(g.with_edge(u, v), path_graph(3)) is not None


# =======================
# Witnesses and pattern wrappers
# =======================
def test_tampered_witness_fails_verification(k22):
    w = find_biclique(k22, 2)
    assert not w.verify(BipartiteGraph(2, 2, [0b11, 0b01]))
    assert not PatternWitness.from_json({"kind": "biclique", "left": [0, 0], "right": [0, 1]}).verify(k22)


def test_as_pattern_picks_specialised_search():
    assert isinstance(as_pattern(complete_bipartite(3, 3)), BicliquePattern)
    assert isinstance(as_pattern(even_cycle_graph(6)), CyclePattern)
    assert isinstance(as_pattern(path_graph(3)), GraphPattern)


def test_pattern_json_and_cache_key():
    for pat in (BicliquePattern(2), CyclePattern(3), GraphPattern(path_graph(2))):
        again = pattern_from_json(pat.to_json())
        assert again == pat
        assert again.cache_key() == pat.cache_key()

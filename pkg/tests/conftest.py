import os
import sys

import numpy as np
import pytest

# ensure project root on path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from bounds_layer.partition import SearchBudget
from core.graph import BipartiteGraph, complete_bipartite, path_graph


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def budget():
    return SearchBudget(max_side=6)


@pytest.fixture
def k22():
    return complete_bipartite(2, 2)


@pytest.fixture
def p3():
    # three vertices, two edges
    return path_graph(2)


def random_graph(rng, left, right, density=0.5):
    mask = rng.random((left, right)) < density
    return BipartiteGraph.from_edges(left, right, [(int(u), int(v)) for u, v in zip(*np.nonzero(mask))])

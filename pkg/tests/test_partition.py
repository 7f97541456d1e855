import pytest

from bounds_layer.partition import (
    FOUND,
    INDETERMINATE,
    NONE,
    PartitionResult,
    SearchBudget,
    merge_best,
    merge_first_found,
    run_partitions,
)
from core.errors import ResourceLimitError


def _square_if_even(x):
    # module level so the process pool can pickle it
    if x % 2 == 0:
        return PartitionResult(FOUND, x * x, nodes=1)
    return PartitionResult(NONE, None, nodes=1)


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(max_side=0)
    with pytest.raises(ValueError):
        SearchBudget(node_limit=0)
    with pytest.raises(ValueError):
        SearchBudget(time_limit=-1.0)
    assert SearchBudget().deadline() is None


def test_check_side_names_flag():
    with pytest.raises(ResourceLimitError) as err:
        SearchBudget(max_side=3).check_side(4, "--nmax")
    assert err.value.flag == "--nmax"
    assert "--nmax" in str(err.value)


def test_stop_skips_later_jobs():
    results = run_partitions(_square_if_even, [1, 3, 4, 6], stop=lambda r: r.status == FOUND)
    assert [r.status for r in results] == [NONE, NONE, FOUND]


def test_pool_and_sequential_agree():
    jobs = [1, 3, 5, 8, 9, 10]
    seq = merge_first_found(run_partitions(_square_if_even, jobs, workers=1, stop=lambda r: r.status == FOUND))
    par = merge_first_found(run_partitions(_square_if_even, jobs, workers=3, stop=lambda r: r.status == FOUND))
    assert (seq.status, seq.witness, seq.nodes) == (par.status, par.witness, par.nodes) == (FOUND, 64, 4)


def test_merge_first_found_rules():
    found = PartitionResult(FOUND, "w", 2)
    none = PartitionResult(NONE, None, 3)
    stuck = PartitionResult(INDETERMINATE, None, 5)
    assert merge_first_found([none, found, stuck]).status == FOUND
    assert merge_first_found([none, found, stuck]).nodes == 5
    assert merge_first_found([none, stuck]).status == INDETERMINATE
    assert merge_first_found([none, none], extra_nodes=1).nodes == 7
    assert merge_first_found([none]).status == NONE


def test_merge_best_prefers_earliest_tie():
    a = PartitionResult(FOUND, "a", 1, 4)
    b = PartitionResult(FOUND, "b", 1, 4)
    c = PartitionResult(FOUND, "c", 1, 3)
    best = merge_best([c, a, b])
    assert (best.witness, best.value, best.nodes) == ("a", 4, 3)
    assert merge_best([a, PartitionResult(INDETERMINATE, None, 1)]).status == INDETERMINATE
    assert merge_best([PartitionResult(NONE, None, 1)]).status == NONE

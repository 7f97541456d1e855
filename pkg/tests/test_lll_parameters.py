import itertools
import math
from dataclasses import replace

import pytest

from bounds_layer.lll.parameters import (
    APPLICABLE,
    INAPPLICABLE,
    check_constants,
    check_lll_conditions,
    dependency_counts,
    derive_params,
    geometric_range,
    implied_host_side,
    log_dependency_counts,
    log_prob_blue,
    log_prob_red,
    margin_sweep,
)
from core.errors import DomainError


def brute_force_overlaps(size_a, size_b, N):
    """Sets of size ``size_b`` meeting a fixed ``size_a``-set of the 2N vertices in at least two points (the set itself excluded)."""
    fixed = set(range(size_a))
    count = 0
    for other in itertools.combinations(range(2 * N), size_b):
        k = len(fixed.intersection(other))
        if k >= 2 and set(other) != fixed:
            count += 1
    return count


# =======================
# Parameters
# =======================
def test_default_constants_at_thousand():
    params = derive_params(4, 4, 10, 4, 33, 1000)
    assert params.s == pytest.approx(2 / 3)
    assert params.red_prob == pytest.approx(0.1)
    assert not params.clamped
    assert params.n == pytest.approx(2763.1, abs=0.05)
    assert params.n_int == 2764
    assert params.a == 2.0


def test_clamped_probability():
    params = derive_params(4, 4, 10, 4, 33, 2)
    assert params.clamped
    assert params.red_prob == 1.0


@pytest.mark.parametrize("args", [(2, 4, 10, 4, 33, 100), (4, 1, 10, 4, 33, 100), (4, 4, 0, 4, 33, 100), (4, 4, 10, 4, 33, 1)])
def test_derive_params_domain(args):
    with pytest.raises(DomainError):
        derive_params(*args)


def test_implied_host_side_inverts_n():
    params = derive_params(4, 4, 10, 4, 33, 1000)
    assert implied_host_side(4, 4, params.n, 4) == 1000
    N = implied_host_side(4, 4, 5000.0, 4)
    assert 4 * N ** (2 / 3) * math.log(N) <= 5000.0 < 4 * (N + 1) ** (2 / 3) * math.log(N + 1)


# =======================
# Probabilities
# =======================
def test_log_prob_red():
    params = derive_params(4, 4, 10, 4, 33, 1000)
    assert log_prob_red(params) == pytest.approx(math.log(24) + 4 * math.log(0.1))
    assert log_prob_red(params) == pytest.approx(-6.032, abs=1e-3)
    assert log_prob_red(replace(params, red_prob=1.0)) == pytest.approx(math.log(24))
    assert log_prob_red(replace(params, red_prob=0.0)) == -math.inf


def test_log_prob_blue():
    params = derive_params(4, 4, 10, 4, 33, 1000)
    assert log_prob_blue(replace(params, red_prob=0.5), 1) == pytest.approx(math.log(4) - 0.5, abs=1e-12)
    assert log_prob_blue(replace(params, red_prob=0.0), 3) == pytest.approx(3 * math.log(4))
    assert log_prob_blue(params) == pytest.approx(-759640, rel=1e-4)
    with pytest.raises(DomainError):
        log_prob_blue(params, 0.5)


def test_probabilities_move_in_opposite_directions():
    params = derive_params(4, 4, 10, 4, 33, 1000)
    lo, hi = replace(params, red_prob=0.1), replace(params, red_prob=0.2)
    assert log_prob_red(hi) > log_prob_red(lo)
    assert log_prob_blue(hi, 10) < log_prob_blue(lo, 10)


# =======================
# Dependency counts
# =======================
def test_dependency_count_examples():
    c = dependency_counts(3, 2, 3)
    assert c.N_AA == 9
    assert c.N_BA == 24
    assert dependency_counts(3, 1, 2).N_AA == 3


@pytest.mark.parametrize("N", [2, 3, 4])
def test_dependency_counts_match_enumeration(N):
    c = dependency_counts(3, 2, N)
    assert c.N_AA == brute_force_overlaps(3, 3, N)
    assert c.N_BB == brute_force_overlaps(4, 4, N)
    # cross counts are the per-pair-of-shared-vertices formulas, so they dominate the enumeration
    assert c.N_AB >= brute_force_overlaps(3, 4, N)
    assert c.N_BA >= brute_force_overlaps(4, 3, N)
    assert c.N_AB == math.comb(3, 2) * math.comb(2 * N - 2, 2)
    assert c.N_BA == math.comb(4, 2) * math.comb(2 * N - 2, 1)


def test_dependency_counts_domain():
    with pytest.raises(DomainError):
        dependency_counts(9, 2, 4)
    with pytest.raises(DomainError):
        dependency_counts(3, 5, 4)


def test_count_json_keeps_big_integers_exact():
    c = dependency_counts(4, 50, 200)
    assert c.to_json()["N_BB"] == str(c.N_BB)


@pytest.mark.parametrize("p,n,N", [(4, 3, 20), (5, 4, 60), (4, 10, 500), (4, 30, 40)])
def test_lgamma_path_matches_exact(p, n, N):
    exact = log_dependency_counts(p, n, N)
    approx = log_dependency_counts(p, n, N, digit_budget=0)
    assert exact["exact"] and not approx["exact"]
    for key in ("N_AA", "N_AB", "N_BA", "N_BB"):
        assert approx[key] == pytest.approx(exact[key], rel=1e-8)


# =======================
# Conditions
# =======================
def test_constant_gate():
    assert check_constants(10, 4, 33) == {"ok": True, "lhs": 41, "rhs": 80}
    assert not check_constants(10, 4, 72)["ok"]
    assert check_constants(10, 4, 72)["lhs"] == check_constants(10, 4, 72)["rhs"] == 80
    assert not check_constants(1, 1, 100)["ok"]


def test_default_constants_fall_short_at_desk_scale():
    rows = margin_sweep(4, 4, 10, 4, 33, geometric_range(10**6, 10**10, 100))
    assert [r["N"] for r in rows] == [10**6, 10**8, 10**10]
    for row in rows:
        assert row["status"] == APPLICABLE
        assert row["cond_a_margin"] < 0
        assert row["cond_b_margin"] < 0
        assert not row["verified"]


def test_rebalanced_constants_verify():
    res = check_lll_conditions(derive_params(4, 4, 0.05, 200, 300, 10**12))
    assert check_constants(0.05, 200, 300)["ok"]
    assert res["status"] == APPLICABLE
    assert res["cond_a_margin"] > 0
    assert res["cond_b_margin"] > 0
    assert res["verified"]
    assert not res["counts_exact"]


def test_constants_violating_gate_do_not_verify():
    res = check_lll_conditions(derive_params(4, 4, 10, 4, 100, 10**10))
    assert res["status"] == INAPPLICABLE or res["cond_b_margin"] < 0


def test_clamped_parameters_are_inapplicable():
    res = check_lll_conditions(derive_params(4, 4, 10, 4, 33, 2))
    assert res["status"] == INAPPLICABLE
    assert "reason" in res
    assert res["cond_a_margin"] is None


def test_cond_b_margin_is_smooth_in_c4():
    N, eps = 10**12, 1e-3
    base = check_lll_conditions(derive_params(4, 4, 0.05, 200, 300, N))
    bumped = check_lll_conditions(derive_params(4, 4, 0.05, 200, 300 + eps, N))
    slope = N ** (2 / 3) * math.log(N) ** 2
    assert (bumped["cond_b_margin"] - base["cond_b_margin"]) / eps == pytest.approx(slope, rel=1e-3)


def test_original_conditions_are_no_stricter():
    params = derive_params(4, 4, 0.05, 200, 300, 10**12)
    simple = check_lll_conditions(params)
    original = check_lll_conditions(params, original_conditions=True)
    assert original["status"] == APPLICABLE
    assert original["cond_a_margin"] >= simple["cond_a_margin"]
    assert original["cond_b_margin"] >= simple["cond_b_margin"]


def test_geometric_range():
    assert geometric_range(10, 1000) == [10, 100, 1000]
    with pytest.raises(DomainError):
        geometric_range(1, 10)

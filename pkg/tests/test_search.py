from fractions import Fraction

import pytest

from online_unit_clustering.adversary.strategy_tree import GiveNode, save_tree
from online_unit_clustering.model import OPEN, Cluster, OnState, apply, assign, translate
from online_unit_clustering.search.candidate_ratios import (best_known_lower_bound_met, candidate_ratios,
                                                            known_bounds, nearest_candidate_below)
from online_unit_clustering.search.forced_ratio_search import (SearchConfig, best_forced_ratio, candidate_points,
                                                               prune_bound)
from online_unit_clustering.verification.verifier import Verdict, verify


def small(**kwargs):
    values = dict(scale=1, grid_step=1, window=4, max_points=4)
    values.update(kwargs)
    return SearchConfig(**values)


def test_candidate_points_on_empty_state():
    assert candidate_points(OnState(scale=10), SearchConfig(scale=10, grid_step=10, window=20)) == [0, 10, 20]


def test_candidate_points_skip_cluster_interiors():
    state = apply(apply(OnState(scale=10), 0, OPEN), 10, assign(0))
    assert candidate_points(state, SearchConfig(scale=10, grid_step=10, window=20)) == [20]
    assert candidate_points(state, SearchConfig(scale=10, grid_step=5, window=20)) == [15, 20]


def test_candidate_points_follow_translations():
    config = SearchConfig(scale=10, grid_step=5, window=200)
    state = apply(apply(OnState(scale=10), 60, OPEN), 75, OPEN)
    shifted = translate(state, 50)
    assert candidate_points(shifted, config) == [p + 50 for p in candidate_points(state, config)]


def test_prune_bound():
    clusters = tuple(Cluster(i, p, p) for i, p in enumerate((0, 20, 40, 41, 42)))
    state = OnState(scale=10, clusters=clusters, points=(0, 20, 40, 41, 42), assignment=(0, 1, 2, 3, 4))
    assert prune_bound(state, 0) == Fraction(5, 3)

    state = OnState(scale=10, clusters=clusters[:2], points=(0, 20), assignment=(0, 1))
    assert prune_bound(state, 3) == Fraction(5, 2)


def test_single_point_forces_nothing():
    result = best_forced_ratio(small(max_points=1))
    assert result.value == 1
    assert result.exhaustive
    assert isinstance(result.strategy.node(result.strategy.root), GiveNode)


def test_two_point_fork_forces_three_halves():
    result = best_forced_ratio(small())
    assert result.value >= Fraction(3, 2)
    assert result.exhaustive and result.target_met is None
    assert verify(result.strategy, result.value).verdict == Verdict.VERIFIED


def test_target_stops_the_search():
    result = best_forced_ratio(small(target=Fraction(3, 2)))
    assert result.value == Fraction(3, 2)
    assert result.target_met
    assert verify(result.strategy, result.value).verdict == Verdict.VERIFIED

    result = best_forced_ratio(small(max_points=2, target=Fraction(3, 2)))
    assert result.value < Fraction(3, 2)
    assert not result.target_met


def test_two_points_stay_between_one_and_two():
    value = best_forced_ratio(small(max_points=2)).value
    assert 1 <= value <= 2


@pytest.mark.parametrize("prune, memo", [(False, False), (False, True), (True, False)])
def test_pruning_and_memo_are_transparent(prune, memo):
    reference = best_forced_ratio(small())
    other = best_forced_ratio(small(prune=prune, memo=memo))
    assert other.value == reference.value
    assert save_tree(other.strategy) == save_tree(reference.strategy)


def test_result_is_independent_of_worker_count():
    sequential = best_forced_ratio(small(max_points=5))
    parallel = best_forced_ratio(small(max_points=5, jobs=3))
    assert parallel.value == sequential.value
    assert save_tree(parallel.strategy) == save_tree(sequential.strategy)


def test_budget_monotonicity():
    values = [best_forced_ratio(small(max_points=n)).value for n in range(1, 6)]
    assert values == sorted(values)


def test_grid_refinement_monotonicity():
    coarse = best_forced_ratio(SearchConfig(scale=2, grid_step=2, window=8, max_points=4)).value
    fine = best_forced_ratio(SearchConfig(scale=2, grid_step=1, window=8, max_points=4)).value
    assert fine >= coarse


def test_node_cap_gives_a_partial_result():
    result = best_forced_ratio(small(max_points=5, node_cap=3))
    assert not result.exhaustive


def test_memo_is_used():
    assert best_forced_ratio(small(prune=False)).memo_hits > 0


@pytest.mark.parametrize("kwargs", [dict(grid_step=0), dict(max_points=0), dict(window=-1), dict(jobs=0),
                                    dict(target=Fraction(-1))])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        small(**kwargs)


def test_candidate_ratios():
    assert candidate_ratios(max_x=20) == [(13, 8), (18, 11)]
    pairs = candidate_ratios()
    assert pairs[:3] == [(13, 8), (18, 11), (21, 13)]
    assert (29, 18) in pairs and (34, 21) in pairs
    assert (23, 14) in pairs
    assert all(Fraction(8, 5) < Fraction(x, y) < Fraction(5, 3) for x, y in pairs)
    with pytest.raises(ValueError):
        candidate_ratios(Fraction(5, 3), Fraction(8, 5))


def test_known_bounds():
    bounds = known_bounds()
    assert sorted(b.ratio for b in bounds if b.kind == "upper") == [Fraction(5, 3), Fraction(7, 4), 2]
    assert sorted(b.ratio for b in bounds if b.kind == "lower") == [Fraction(3, 2), Fraction(8, 5), Fraction(13, 8)]
    assert best_known_lower_bound_met(Fraction(3, 2)).ratio == Fraction(3, 2)
    assert best_known_lower_bound_met(Fraction(1)) is None
    assert nearest_candidate_below(Fraction(13, 8)) == (13, 8)
    assert nearest_candidate_below(Fraction(3, 2)) is None


def test_capped_result_is_independent_of_worker_count():
    config = dict(scale=2, grid_step=1, window=8, max_points=6, node_cap=150)
    sequential = best_forced_ratio(SearchConfig(**config))
    parallel = best_forced_ratio(SearchConfig(jobs=8, **config))
    assert not sequential.exhaustive
    assert (parallel.value, parallel.exhaustive) == (sequential.value, sequential.exhaustive)

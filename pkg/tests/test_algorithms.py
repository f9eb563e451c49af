from fractions import Fraction

import numpy as np
import pytest

from online_unit_clustering.algorithms import get_algorithm
from online_unit_clustering.algorithms.grid_algorithm import home_cell
from online_unit_clustering.algorithms.online_algorithm_base import OnlineAlgorithm
from online_unit_clustering.algorithms.scripted_algorithm import ScriptedAlgorithm
from online_unit_clustering.algorithms.simulation import run
from online_unit_clustering.errors import IllegalMoveError
from online_unit_clustering.model import OPEN, assign
from online_unit_clustering.util import parse_position


def scaled(texts):
    return [parse_position(t, 10) for t in texts]


def test_greedy_assigns_whenever_possible():
    trace = run(get_algorithm("greedy"), scaled(["3", "4", "5", "6"]), 10)
    assert [e.decision for e in trace.events] == ["open", "assign", "open", "assign"]
    assert trace.on_cost == 2 and trace.opt_cost == 2


def test_greedy_prefers_leftmost_cluster():
    # 8 and 8.5 are two clusters after the first two decisions are forced by a script
    trace = run(ScriptedAlgorithm(["open", "open"]), scaled(["8", "8.5"]), 10)
    decision = get_algorithm("greedy").decide(trace.final_state, parse_position("9", 10))
    assert decision == assign(0)


def test_grid_algorithm_uses_unit_cells():
    trace = run(get_algorithm("grid"), scaled(["0.5", "0.9", "1", "1.9", "2"]), 10)
    assert [e.cluster for e in trace.events] == ["#0", "#0", "#1", "#1", "#2"]
    assert trace.ratio == Fraction(3, 2)


def test_home_cell_floors_negative_positions():
    assert home_cell(-1, 10) == -1
    assert home_cell(0, 10) == 0
    assert home_cell(19, 10) == 1


def test_grid_algorithm_is_two_competitive_on_random_inputs():
    rng = np.random.default_rng(5)
    for _ in range(200):
        points = rng.integers(0, 100, size=int(rng.integers(1, 12))).tolist()
        assert 1 <= run(get_algorithm("grid"), points, 10).ratio <= 2


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        get_algorithm("first-fit")


class AlwaysOpen(OnlineAlgorithm):
    name = "always-open"

    def decide(self, state, p):
        return OPEN


def test_infeasible_decision_is_reported_with_step():
    with pytest.raises(IllegalMoveError) as e:
        run(AlwaysOpen(), scaled(["3", "4", "3.5"]), 10)
    assert e.value.step == 3


def test_running_costs_are_recorded_per_step():
    trace = run(get_algorithm("greedy"), scaled(["3", "4"]), 10)
    assert [(e.step, e.on_cost, e.opt_cost, e.ratio) for e in trace.events] == [(1, 1, 1, 1), (2, 1, 1, 1)]


def test_script_exhaustion():
    with pytest.raises(IllegalMoveError):
        run(ScriptedAlgorithm(["open"]), scaled(["1", "5"]), 10)

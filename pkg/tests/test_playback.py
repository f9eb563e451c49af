import json
from fractions import Fraction

import pytest

from online_unit_clustering.adversary.builtin_trees import builtin_kk13
from online_unit_clustering.adversary.playback import play, replay_witness
from online_unit_clustering.adversary.strategy_tree import load_tree
from online_unit_clustering.algorithms import get_algorithm
from online_unit_clustering.algorithms.scripted_algorithm import ScriptedAlgorithm
from online_unit_clustering.errors import IllegalMoveError, TreeIncompleteError
from online_unit_clustering.trace import dump_trace, load_trace, replay_trace


def two_step_tree(second_pos, second_branches):
    return load_tree(json.dumps({"scale": 10, "root": "n1", "nodes": {
        "n1": {"kind": "give", "pos": "0", "branches": [{"match": {"open": "A"}, "child": "n2"}]},
        "n2": {"kind": "give", "pos": second_pos, "branches": second_branches},
        "L1": {"kind": "leaf", "leaf": {"tag": "L1", "expect": "1/1"}},
    }}))


def test_greedy_ends_in_the_three_point_volley():
    trace = play(builtin_kk13(), get_algorithm("greedy"))
    assert trace.leaf_id == "L2"
    assert (trace.on_cost, trace.opt_cost, trace.ratio) == (5, 3, Fraction(5, 3))
    assert [e.cluster for e in trace.events[:4]] == ["D", "D", "E", "E"]


def test_grid_opens_a_second_cluster_at_four():
    trace = play(builtin_kk13(), get_algorithm("grid"))
    assert trace.leaf_id == "L1"
    assert trace.ratio == Fraction(2)
    assert trace.ratio >= Fraction(13, 8)


@pytest.mark.parametrize("name", ["greedy", "grid"])
def test_trace_file_replays_to_identical_costs(name):
    trace = play(builtin_kk13(), get_algorithm(name))
    loaded = load_trace(dump_trace(trace), 10)
    assert loaded.leaf_id == trace.leaf_id
    replayed = replay_trace(loaded)
    assert replayed.events == trace.events


def test_trace_lines_are_json():
    lines = dump_trace(play(builtin_kk13(), get_algorithm("greedy"))).splitlines()
    first, last = json.loads(lines[0]), json.loads(lines[-1])
    assert first == {"step": 1, "point": "3", "decision": "open", "cluster": "D", "on_cost": 1, "opt_cost": 1,
                     "ratio": "1/1"}
    assert last["leaf"] == "L2" and last["tag"] == "L2" and last["ratio"] == "5/3"


def test_tampered_trace_is_rejected():
    text = dump_trace(play(builtin_kk13(), get_algorithm("greedy"))).replace('"on_cost": 5', '"on_cost": 4')
    with pytest.raises(IllegalMoveError):
        replay_trace(load_trace(text, 10))


def test_missing_branch_raises():
    tree = two_step_tree("0.5", [{"match": {"assign": "A"}, "child": "L1"}])
    assert play(tree, get_algorithm("greedy")).leaf_id == "L1"
    with pytest.raises(TreeIncompleteError) as e:
        play(tree, ScriptedAlgorithm(["open", "open"]))
    assert e.value.node_id == "n2" and e.value.decision == "open"


def test_covered_give_is_recorded():
    tree = two_step_tree("0", [{"match": "otherwise", "child": "L1"}])
    trace = play(tree, get_algorithm("greedy"))
    assert trace.covered_gives == (2,)
    assert trace.on_cost == 1


def test_replay_witness_follows_the_scripted_decisions():
    trace = replay_witness(builtin_kk13(), ["open", "assign:D", "open", "assign:E", "open", "open", "open"])
    assert trace.leaf_id == "L2"
    assert trace.ratio == Fraction(5, 3)

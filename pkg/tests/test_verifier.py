import json
from dataclasses import replace
from fractions import Fraction

import pytest

from online_unit_clustering.adversary.builtin_trees import builtin_kk13
from online_unit_clustering.adversary.playback import replay_witness
from online_unit_clustering.adversary.strategy_tree import (GiveNode, LeafInfo, LeafNode, StrategyTree, VolleyNode,
                                                            load_tree, match_branch)
from online_unit_clustering.model import Cluster, OnState, apply, feasible_decisions
from online_unit_clustering.offline_opt import opt_cover, ratio
from online_unit_clustering.verification.verifier import (Verdict, VerifyOptions, check_dominance,
                                                          format_leaf_stats, leaf_stats, report_to_json, verify)

TABLE_MINIMA = {"L1": Fraction(2, 1), "L2": Fraction(5, 3), "L3": Fraction(5, 3), "L4": Fraction(7, 4),
                "L5": Fraction(10, 6), "L6": Fraction(9, 5), "L7": Fraction(10, 6), "L8": Fraction(13, 8),
                "L9": Fraction(13, 8), "L10": Fraction(13, 8)}


@pytest.fixture(scope="module")
def report():
    return verify(builtin_kk13(), Fraction(13, 8))


def with_node(tree, node):
    return replace(tree, nodes={**tree.nodes, node.id: node})


def test_builtin_tree_forces_13_8(report):
    assert report.verdict == Verdict.VERIFIED
    assert report.overall_min_ratio == Fraction(13, 8)
    assert report.incomplete == [] and report.unreached == []
    assert not report.aborted


def test_leaf_minima_match_the_annotations(report):
    assert {r.node_id: r.min_ratio for r in report.leaves} == TABLE_MINIMA
    stats = leaf_stats(report)
    assert len(stats) == 10 and all(s.matches for s in stats)
    assert "MISMATCH" not in format_leaf_stats(stats)


def test_lower_costs_per_leaf(report):
    records = {r.node_id: r for r in report.leaves}
    assert (records["L1"].on_cost, records["L1"].opt_cost) == (2, 1)
    assert (records["L2"].on_cost, records["L2"].opt_cost) == (5, 3)
    assert (records["L7"].on_cost, records["L7"].opt_cost) == (10, 6)


def test_higher_target_fails_with_replayable_witness():
    tree = builtin_kk13()
    report = verify(tree, Fraction(5, 3))
    assert report.verdict == Verdict.FAILED
    assert report.overall_min_ratio == Fraction(13, 8)
    assert report.witness_leaf == "L10"
    assert "assign:G" in report.witness

    trace = replay_witness(tree, report.witness)
    assert trace.leaf_id == report.witness_leaf
    assert trace.ratio == Fraction(13, 8)
    assert tuple(e.point for e in trace.events) == report.witness_points


def test_truncated_volley_fails():
    tree = builtin_kk13()
    truncated = with_node(tree, VolleyNode("L9", (115,), tree.node("L9").leaf))
    report = verify(truncated, Fraction(13, 8))
    assert report.verdict == Verdict.FAILED
    assert report.overall_min_ratio < Fraction(13, 8)
    assert report.witness_leaf == "L9"


def test_tampered_annotation_is_flagged():
    tree = builtin_kk13()
    tampered = with_node(tree, LeafNode("L4", LeafInfo("L4", Fraction(9, 5))))
    report = verify(tampered, Fraction(13, 8))
    assert report.verdict == Verdict.VERIFIED
    mismatches = [s for s in leaf_stats(report) if not s.matches]
    assert [(s.node_id, s.expected, s.computed) for s in mismatches] == [("L4", Fraction(9, 5), Fraction(7, 4))]
    assert "MISMATCH" in format_leaf_stats(leaf_stats(report))


def test_unmatched_decision_makes_the_tree_incomplete():
    tree = builtin_kk13()
    n12 = tree.node("n12")
    without_otherwise = with_node(tree, GiveNode("n12", n12.pos, n12.branches[:2]))
    report = verify(without_otherwise, Fraction(13, 8))
    assert report.verdict == Verdict.INCOMPLETE
    assert report.reason == "tree"
    assert [(i.node_id, i.decision) for i in report.incomplete] == [("n12", "assign:G")]


def test_node_cap_aborts_with_partial_statistics():
    report = verify(builtin_kk13(), Fraction(13, 8), VerifyOptions(node_cap=50))
    assert report.verdict == Verdict.INCOMPLETE
    assert report.reason == "resources"
    assert report.explored_nodes == 50


def test_pruning_does_not_change_values(report):
    unpruned = verify(builtin_kk13(), Fraction(13, 8), VerifyOptions(prune=False, dedup=False))
    assert unpruned.verdict == report.verdict
    assert unpruned.overall_min_ratio == report.overall_min_ratio
    assert unpruned.witness == report.witness
    assert [(r.node_id, r.min_ratio, r.witness) for r in unpruned.leaves] == \
           [(r.node_id, r.min_ratio, r.witness) for r in report.leaves]
    assert unpruned.paths >= report.paths


def test_report_is_independent_of_worker_count(report):
    parallel = verify(builtin_kk13(), Fraction(13, 8), VerifyOptions(jobs=4))
    assert report_to_json(parallel) == report_to_json(report)


def test_report_json(report):
    data = json.loads(report_to_json(report))
    assert data["verdict"] == "VERIFIED"
    assert data["target"] == "13/8" and data["overall_min_ratio"] == "13/8"
    assert len(data["leaves"]) == 10 and all(leaf["match"] for leaf in data["leaves"])
    assert data["leaves"][4] == {"node": "L5", "tag": "i", "expected": "5/3", "min_ratio": "5/3",
                                 "on_cost": data["leaves"][4]["on_cost"], "opt_cost": data["leaves"][4]["opt_cost"],
                                 "match": True, "paths": data["leaves"][4]["paths"]}
    assert data["witness"]["decisions"][0] == "open"
    assert data["witness"]["points"][:2] == ["3", "4"]
    assert data["stats"]["reason"] is None


def test_tree_without_points_records_nothing():
    tree = StrategyTree(scale=10, root="L1", nodes={"L1": LeafNode("L1", LeafInfo("L1", Fraction(1)))})
    report = verify(tree, Fraction(1))
    assert report.verdict == Verdict.FAILED
    assert report.overall_min_ratio is None
    assert leaf_stats(report) == [] and format_leaf_stats([]) == ""
    assert report.unreached == ["L1"]


def all_path_ratios(tree, node_id, state):
    node = tree.node(node_id)
    if isinstance(node, GiveNode):
        ratios = []
        for decision in feasible_decisions(state, node.pos):
            branch, label = match_branch(node, state, decision)
            ratios += all_path_ratios(tree, branch.child, apply(state, node.pos, decision, label))
        return ratios
    if isinstance(node, VolleyNode):
        states = [state]
        for p in node.points:
            states = [apply(s, p, d) for s in states for d in feasible_decisions(s, p)]
        return [ratio(s.on_cost, opt_cover(s.points, s.scale).count) for s in states]
    return [ratio(state.on_cost, opt_cover(state.points, state.scale).count)]


def test_enumeration_matches_brute_force_on_a_small_tree():
    tree = load_tree(json.dumps({"scale": 10, "root": "n1", "nodes": {
        "n1": {"kind": "give", "pos": "0", "branches": [{"match": {"open": "A"}, "child": "n2"}]},
        "n2": {"kind": "give", "pos": "0.5", "branches": [{"match": {"assign": "A"}, "child": "V1"},
                                                          {"match": {"open": "B"}, "child": "V2"}]},
        "V1": {"kind": "volley", "points": ["1", "1.5", "-0.5"], "leaf": {"tag": "V1", "expect": "3/2"}},
        "V2": {"kind": "volley", "points": ["1", "-0.5"], "leaf": {"tag": "V2", "expect": "3/2"}},
    }}))
    ratios = all_path_ratios(tree, tree.root, OnState(scale=10))
    report = verify(tree, Fraction(1), VerifyOptions(prune=False, dedup=False))
    assert report.paths == len(ratios)
    assert report.overall_min_ratio == min(ratios)
    assert verify(tree, Fraction(1)).overall_min_ratio == min(ratios)


def state_of(*clusters, points):
    built = tuple(Cluster(i, lo, hi, label) for i, (lo, hi, label) in enumerate(clusters))
    assignment = tuple(next(c.id for c in built if c.covers(p)) for p in points)
    return OnState(scale=10, clusters=built, points=points, assignment=assignment)


def test_dominance_examples():
    a = state_of((80, 80, "G"), (85, 90, "H"), points=(80, 85, 90))
    b = state_of((80, 90, "G"), (85, 85, "H"), points=(80, 85, 90))
    assert not check_dominance(a, b)
    assert not check_dominance(b, a)
    assert check_dominance(a, a)
    assert check_dominance(state_of((50, 50, None), points=(50,)), state_of((45, 50, None), points=(45, 50)))
    assert not check_dominance(state_of((45, 50, None), points=(45, 50)), state_of((50, 50, None), points=(50,)))


def test_dominance_ignores_labels():
    a = state_of((50, 50, "A"), (80, 80, "B"), points=(50, 80))
    b = state_of((50, 50, "B"), (80, 80, "A"), points=(50, 80))
    assert check_dominance(a, b)


def test_crossing_clusters_are_dominated():
    a = state_of((5, 12, None), (0, 0, None), points=(0, 5, 9, 12))
    b = state_of((5, 12, None), (0, 9, None), points=(0, 5, 9, 12))
    assert check_dominance(a, b)
    assert not check_dominance(b, a)


def test_dominance_needs_equal_cost():
    with pytest.raises(ValueError):
        check_dominance(state_of((50, 50, None), points=(50,)),
                        state_of((50, 50, None), (80, 80, None), points=(50, 80)))


def test_options_are_validated():
    with pytest.raises(ValueError):
        VerifyOptions(jobs=0)
    with pytest.raises(ValueError):
        VerifyOptions(node_cap=0)


def crossing_volley_tree():
    # after Y=[0.5] the volley 0, 0.9, 1.2 can end in Y=[0.5,1.2] with X=[0,0.9] crossing it, which the
    # earlier explored X=[0,0] with Y=[0.5,1.2] dominates
    return load_tree(json.dumps({"scale": 10, "root": "n1", "nodes": {
        "n1": {"kind": "give", "pos": "0.5", "branches": [{"match": {"open": "Y"}, "child": "V1"}]},
        "V1": {"kind": "volley", "points": ["0", "0.9", "1.2"], "leaf": {"tag": "V1", "expect": "1/1"}},
    }}))


def test_dominance_pruning_fires_without_changing_values():
    tree = crossing_volley_tree()
    pruned = verify(tree, Fraction(1))
    unpruned = verify(tree, Fraction(1), VerifyOptions(prune=False))
    assert pruned.pruned > 0 and unpruned.pruned == 0
    assert pruned.paths < unpruned.paths
    assert pruned.verdict == unpruned.verdict == Verdict.VERIFIED
    assert pruned.overall_min_ratio == unpruned.overall_min_ratio == Fraction(1)
    assert pruned.witness == unpruned.witness
    assert [(r.node_id, r.min_ratio, r.witness) for r in pruned.leaves] == \
           [(r.node_id, r.min_ratio, r.witness) for r in unpruned.leaves]

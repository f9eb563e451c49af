# -*- coding: utf-8 -*-
""" Exhaustive verification of adversary strategy trees against every deterministic lazy online algorithm.

Every feasible decision at every point is enumerated. Give nodes route each decision to the branch it matches,
volleys branch on all decisions without routing, and every complete path contributes its exact ratio
C_ON / C_OPT to the record of the leaf it ends in. The tree forces a ratio r iff the minimum over all paths is
at least r and no feasible decision was left unmatched.
"""

import json
import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from multiprocessing.pool import ThreadPool
from typing import List, Optional, Tuple

from online_unit_clustering.adversary.strategy_tree import GiveNode, VolleyNode, match_branch, validate_tree
from online_unit_clustering.errors import ResourceLimitError
from online_unit_clustering.model import OnState, apply, decision_token, feasible_decisions, reach, state_key
from online_unit_clustering.offline_opt import opt_cover, ratio
from online_unit_clustering.util import format_position, format_ratio

logger = logging.getLogger("Verifier")

DEFAULT_NODE_CAP = 10 ** 7
# give levels handled inline before the remaining subtrees are handed to the worker pool
PARALLEL_SPLIT_DEPTH = 4


class Verdict(str, Enum):
    VERIFIED = "VERIFIED"
    FAILED = "FAILED"
    INCOMPLETE = "INCOMPLETE"


@dataclass(frozen=True)
class VerifyOptions:
    prune: bool = True
    dedup: bool = True
    node_cap: int = DEFAULT_NODE_CAP
    jobs: int = 1

    def __post_init__(self):
        if self.node_cap < 1:
            raise ValueError(f"node cap must be positive, got {self.node_cap}")
        if self.jobs < 1:
            raise ValueError(f"number of jobs must be positive, got {self.jobs}")


@dataclass
class LeafRecord:
    node_id: str
    tag: str
    expected: Fraction
    min_ratio: Fraction
    on_cost: int
    opt_cost: int
    paths: int = 1
    witness: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Incompleteness:
    node_id: str
    decision: str
    path: Tuple[str, ...]


@dataclass
class VerificationReport:
    verdict: Verdict
    target: Fraction
    overall_min_ratio: Optional[Fraction]
    scale: int
    leaves: List[LeafRecord] = field(default_factory=list)
    witness: Tuple[str, ...] = ()
    witness_leaf: Optional[str] = None
    witness_points: Tuple[int, ...] = ()
    incomplete: List[Incompleteness] = field(default_factory=list)
    unreached: List[str] = field(default_factory=list)
    explored_nodes: int = 0
    paths: int = 0
    pruned: int = 0
    duplicates: int = 0
    aborted: bool = False

    @property
    def reason(self):
        if self.aborted:
            return "resources"
        if self.incomplete:
            return "tree"
        return None


def check_dominance(a, b):
    """ True if state `a` is at least as good for the algorithm as state `b`.

    That is the case when a's clusters can be perfectly matched to b's clusters with reach(b_i) contained in
    reach(a_i): every continuation of a fixed point sequence played from b can then be mimicked from a at the
    same cost, so the same volley played from b never ends below its minimum from a. That conclusion needs both
    states to hold the same point multiset, which states at one volley index always do; the matching only looks
    at clusters. Labels are ignored.

    Strict dominance needs crossing clusters in `b`, e.g. a = {[0,0], [5,12]} dominates b = {[0,9], [5,12]}.

    :raises ValueError: unless both states have equal cost on the same grid
    """
    if a.on_cost != b.on_cost or a.scale != b.scale:
        raise ValueError(f"dominance needs equal cost on the same grid, got C_ON {a.on_cost} and {b.on_cost}")

    unit = a.unit

    def contains(ca, cb):
        a_lo, a_hi = reach(ca, unit)
        b_lo, b_hi = reach(cb, unit)
        return a_lo <= b_lo and b_hi <= a_hi

    candidates = [[j for j, cb in enumerate(b.clusters) if contains(ca, cb)] for ca in a.clusters]
    matched_to = {}

    def augment(i, seen):
        for j in candidates[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in matched_to or augment(matched_to[j], seen):
                matched_to[j] = i
                return True
        return False

    return all(augment(i, set()) for i in range(len(a.clusters)))


class _Accumulator:
    """ Merge-only results of a contiguous part of the depth-first enumeration. """

    def __init__(self, scale):
        self.scale = scale
        self.leaves = {}
        self.best = None  # (ratio, leaf id, decision tokens, points)
        self.incomplete = []
        self.paths = 0
        self.pruned = 0
        self.duplicates = 0

    def add_leaf(self, node, state, tokens):
        opt_cost = opt_cover(state.points, self.scale).count
        if opt_cost == 0:
            return
        r = ratio(state.on_cost, opt_cost)
        self.paths += 1
        record = self.leaves.get(node.id)
        if record is None:
            self.leaves[node.id] = LeafRecord(node.id, node.leaf.tag, node.leaf.expected_min_ratio, r,
                                              state.on_cost, opt_cost, 1, tokens)
        else:
            record.paths += 1
            if r < record.min_ratio:
                record.min_ratio, record.on_cost, record.opt_cost, record.witness = r, state.on_cost, opt_cost, tokens
        if self.best is None or r < self.best[0]:
            self.best = (r, node.id, tokens, state.points)

    def add_incomplete(self, node_id, token, tokens):
        logger.debug(f"decision '{token}' at node '{node_id}' matches no branch")
        self.incomplete.append(Incompleteness(node_id, token, tokens))

    def merge(self, later):
        """ Folds in the results of a part of the enumeration that comes after this one; ties keep ours. """
        for node_id, record in later.leaves.items():
            mine = self.leaves.get(node_id)
            if mine is None:
                self.leaves[node_id] = record
                continue
            mine.paths += record.paths
            if record.min_ratio < mine.min_ratio:
                mine.min_ratio, mine.on_cost, mine.opt_cost, mine.witness = \
                    record.min_ratio, record.on_cost, record.opt_cost, record.witness
        if later.best is not None and (self.best is None or later.best[0] < self.best[0]):
            self.best = later.best
        self.incomplete.extend(later.incomplete)
        self.paths += later.paths
        self.pruned += later.pruned
        self.duplicates += later.duplicates


class _Budget:
    def __init__(self, cap):
        self.cap = cap
        self.explored = 0
        self._lock = threading.Lock()

    def charge(self):
        with self._lock:
            self.explored += 1
            if self.explored > self.cap:
                raise ResourceLimitError(self.cap, self.explored)


@dataclass(frozen=True)
class _Task:
    node_id: str
    state: OnState
    tokens: Tuple[str, ...]


class _Sink:
    def __init__(self, scale):
        self.acc = _Accumulator(scale)


class _Splitter:
    """ Collects the enumeration in order: inline results up to the split depth, deferred subtrees below. """

    def __init__(self, scale, split_depth):
        self.scale = scale
        self.split_depth = split_depth
        self.acc = _Accumulator(scale)
        self.segments = []

    def defer(self, task):
        self.segments.append(self.acc)
        self.segments.append(task)
        self.acc = _Accumulator(self.scale)

    def finish(self):
        self.segments.append(self.acc)
        return self.segments


class _Explorer:
    def __init__(self, tree, options, budget):
        self.tree = tree
        self.options = options
        self.budget = budget

    def explore(self, node_id, state, tokens, out, depth=0):
        node = self.tree.nodes[node_id]
        if isinstance(node, GiveNode):
            self._give(node, state, tokens, out, depth)
        elif isinstance(node, VolleyNode):
            self._volley(node, 0, state, tokens, out, {})
        else:
            out.acc.add_leaf(node, state, tokens)

    def run_task(self, task):
        sink = _Sink(self.tree.scale)
        try:
            self.explore(task.node_id, task.state, task.tokens, sink)
        except ResourceLimitError:
            return sink.acc, True
        return sink.acc, False

    def _give(self, node, state, tokens, out, depth):
        self.budget.charge()
        children = []
        seen = set()
        for decision in feasible_decisions(state, node.pos):
            token = decision_token(state, decision)
            branch, label = match_branch(node, state, decision)
            if branch is None:
                out.acc.add_incomplete(node.id, token, tokens)
                continue
            child = apply(state, node.pos, decision, label)
            if self.options.dedup:
                key = (branch.child, state_key(child, labels=True))
                if key in seen:
                    out.acc.duplicates += 1
                    continue
                seen.add(key)
            children.append((branch.child, child, token))

        for child_id, child, token in children:
            if isinstance(out, _Splitter) and depth + 1 >= out.split_depth and \
                    isinstance(self.tree.nodes[child_id], GiveNode):
                out.defer(_Task(child_id, child, tokens + (token,)))
            else:
                self.explore(child_id, child, tokens + (token,), out, depth + 1)

    def _volley(self, node, index, state, tokens, out, explored):
        if index and self.options.prune and self._dominated(explored.setdefault(index, []), state):
            out.acc.pruned += 1
            logger.debug(f"pruned dominated state in volley '{node.id}' after {index} points")
            return
        if index == len(node.points):
            out.acc.add_leaf(node, state, tokens)
            return
        self.budget.charge()
        p = node.points[index]
        children = []
        seen = set()
        for decision in feasible_decisions(state, p):
            child = apply(state, p, decision)
            if self.options.dedup:
                key = state_key(child)
                if key in seen:
                    out.acc.duplicates += 1
                    continue
                seen.add(key)
            children.append((child, decision_token(state, decision)))

        for child, token in children:
            self._volley(node, index + 1, child, tokens + (token,), out, explored)

    @staticmethod
    def _dominated(earlier, state):
        # all states at one volley index hold the same points; earlier ones are fully explored already, so the
        # first minimal path stays the witness
        if any(k.on_cost == state.on_cost and check_dominance(k, state) for k in earlier):
            return True
        earlier.append(state)
        return False


def verify(tree, target, options=None):
    """ Enumerates every deterministic lazy algorithm behaviour against `tree` and checks the forced ratio.

    :param tree: :class:`StrategyTree`
    :param target: ratio (Fraction) the tree is supposed to force
    :param options: :class:`VerifyOptions`
    :return: :class:`VerificationReport`
    """
    options = options or VerifyOptions()
    target = Fraction(target)
    validate_tree(tree)
    budget = _Budget(options.node_cap)
    explorer = _Explorer(tree, options, budget)
    root_state = OnState(scale=tree.scale)
    logger.info(f"verifying against target {format_ratio(target)} (prune={options.prune}, dedup={options.dedup}, "
                f"jobs={options.jobs})")

    aborted = False
    if options.jobs > 1:
        splitter = _Splitter(tree.scale, PARALLEL_SPLIT_DEPTH)
        try:
            explorer.explore(tree.root, root_state, (), splitter)
        except ResourceLimitError:
            aborted = True
        segments = splitter.finish()
        tasks = [s for s in segments if isinstance(s, _Task)] if not aborted else []
        tpool = ThreadPool(options.jobs)
        results = iter(tpool.map(explorer.run_task, tasks))
        tpool.close()
        tpool.join()

        acc = _Accumulator(tree.scale)
        for segment in segments:
            if isinstance(segment, _Task):
                if aborted:
                    continue
                partial, task_aborted = next(results)
                acc.merge(partial)
                aborted = aborted or task_aborted
            else:
                acc.merge(segment)
    else:
        sink = _Sink(tree.scale)
        try:
            explorer.explore(tree.root, root_state, (), sink)
        except ResourceLimitError:
            aborted = True
        acc = sink.acc

    report = _build_report(tree, target, acc, budget, aborted)
    logger.info(f"{report.verdict.value}: min ratio {format_ratio(report.overall_min_ratio)} over {report.paths} "
                f"paths, {report.explored_nodes} nodes explored")
    return report


def _build_report(tree, target, acc, budget, aborted):
    leaves = [acc.leaves[n.id] for n in tree.terminals() if n.id in acc.leaves]
    unreached = [n.id for n in tree.terminals() if n.id not in acc.leaves]

    seen = set()
    incomplete = []
    for item in acc.incomplete:
        if (item.node_id, item.decision) not in seen:
            seen.add((item.node_id, item.decision))
            incomplete.append(item)

    overall = acc.best[0] if acc.best is not None else None
    if aborted or incomplete:
        verdict = Verdict.INCOMPLETE
    elif overall is not None and overall >= target:
        verdict = Verdict.VERIFIED
    else:
        verdict = Verdict.FAILED

    report = VerificationReport(verdict=verdict, target=target, overall_min_ratio=overall, scale=tree.scale,
                                leaves=leaves, incomplete=incomplete, unreached=unreached,
                                explored_nodes=min(budget.explored, budget.cap), paths=acc.paths,
                                pruned=acc.pruned, duplicates=acc.duplicates, aborted=aborted)
    if acc.best is not None:
        _, report.witness_leaf, report.witness, report.witness_points = acc.best
    return report


@dataclass(frozen=True)
class LeafStat:
    node_id: str
    tag: str
    expected: Fraction
    computed: Fraction
    paths: int
    matches: bool


def leaf_stats(report):
    """ Per-leaf computed minima next to the tree's expected annotations; `matches` is False on a mismatch. """
    return [LeafStat(r.node_id, r.tag, r.expected, r.min_ratio, r.paths, r.expected == r.min_ratio)
            for r in report.leaves]


def format_leaf_stats(stats):
    lines = [f"{'leaf':<6} {'tag':<5} {'expected':>9} {'computed':>9} {'paths':>7}  status"]
    for s in stats:
        lines.append(f"{s.node_id:<6} {s.tag:<5} {format_ratio(s.expected):>9} {format_ratio(s.computed):>9} "
                     f"{s.paths:>7}  {'ok' if s.matches else 'MISMATCH'}")
    return "\n".join(lines) if stats else ""


def report_to_json(report):
    """ Report file contents. Counters live under "stats"; everything else depends only on the tree and target. """
    data = {
        "verdict": report.verdict.value,
        "target": format_ratio(report.target),
        "overall_min_ratio": format_ratio(report.overall_min_ratio),
        "leaves": [{"node": r.node_id, "tag": r.tag, "expected": format_ratio(r.expected),
                    "min_ratio": format_ratio(r.min_ratio), "on_cost": r.on_cost, "opt_cost": r.opt_cost,
                    "match": r.expected == r.min_ratio, "paths": r.paths} for r in report.leaves],
        "witness": {"leaf": report.witness_leaf, "decisions": list(report.witness),
                    "points": [format_position(p, report.scale) for p in report.witness_points]},
        "incomplete": [{"node": i.node_id, "decision": i.decision, "path": list(i.path)}
                       for i in report.incomplete],
        "unreached": report.unreached,
        "stats": {"explored_nodes": report.explored_nodes, "paths": report.paths, "pruned": report.pruned,
                  "duplicates": report.duplicates, "aborted": report.aborted, "reason": report.reason},
    }
    return json.dumps(data, indent=2) + "\n"

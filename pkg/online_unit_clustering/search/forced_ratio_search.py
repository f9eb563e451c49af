# -*- coding: utf-8 -*-
""" Minimax search for competitive ratios an adaptive adversary can force on a discretised line.

The adversary picks the next point from a grid window or stops, the algorithm answers with any feasible
decision. The value of a state is

    V(state, k) = max(C_ON / C_OPT if state has points, max_p min_d V(apply(state, p, d), k - 1))

and the search returns V of the empty state together with a strategy tree forcing it. Alpha-beta is used in its
fail-hard form, so every call returns exactly clamp(V, alpha, beta); the transposition table stores a lower and
an upper bound per (canonical state, remaining points) and is therefore valid for any window.
"""

import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing.pool import ThreadPool
from typing import Optional

from online_unit_clustering.adversary.strategy_tree import (AssignTo, Branch, GiveNode, LeafInfo, LeafNode, OpenAs,
                                                            StrategyTree, validate_tree)
from online_unit_clustering.errors import ResourceLimitError
from online_unit_clustering.model import OnState, apply, feasible_decisions, state_key
from online_unit_clustering.offline_opt import opt_cover, ratio
from online_unit_clustering.util import DEFAULT_SCALE, format_position, format_ratio

logger = logging.getLogger("ForcedRatioSearch")

DEFAULT_NODE_CAP = 10 ** 7
NEG = Fraction(-1)
INF = math.inf


@dataclass(frozen=True)
class SearchConfig:
    """ Search parameters; all positions and lengths are in scaled steps (1/`scale` of a unit).

    :param grid_step: the adversary only gives multiples of `grid_step`
    :param window: points lie in [0, window]; later points also stay within one unit of the given ones
    :param max_points: number of points the adversary may give
    :param target: stop improving once this ratio is forced; the reported value is then min(V, target)
    """
    scale: int = DEFAULT_SCALE
    grid_step: int = 5
    window: int = 40
    max_points: int = 4
    target: Optional[Fraction] = None
    node_cap: int = DEFAULT_NODE_CAP
    jobs: int = 1
    prune: bool = True
    memo: bool = True
    progress_every: int = 100000

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.grid_step < 1:
            raise ValueError(f"grid step must be positive, got {self.grid_step}")
        if self.window < 0:
            raise ValueError(f"window must not be negative, got {self.window}")
        if self.max_points < 1:
            raise ValueError(f"max points must be positive, got {self.max_points}")
        if self.target is not None and self.target < 0:
            raise ValueError(f"target must not be negative, got {self.target}")
        if self.node_cap < 1 or self.jobs < 1 or self.progress_every < 1:
            raise ValueError("node cap, jobs and progress interval must be positive")


@dataclass
class SearchResult:
    value: Fraction
    strategy: Optional[StrategyTree]
    explored: int
    memo_hits: int
    exhaustive: bool
    target_met: Optional[bool] = None


def candidate_points(state, config):
    """ Grid positions the adversary may give next, ascending.

    The window is [0, config.window], narrowed to one unit around the given points once there are any.
    Positions inside an existing cluster are skipped: they are free for the algorithm and only help OPT.
    """
    if state.points:
        lo = max(0, min(state.points) - config.scale)
        hi = min(config.window, max(state.points) + config.scale)
    else:
        lo, hi = 0, config.window
    q = config.grid_step
    first = -(-lo // q) * q
    return [x for x in range(first, hi + 1, q) if not any(c.covers(x) for c in state.clusters)]


def prune_bound(state, remaining):
    """ Upper bound on every value reachable from `state`: each further point costs the algorithm at most one
    cluster and C_OPT never decreases.

    :raises UndefinedRatioError: for a state without points
    """
    return ratio(state.on_cost + remaining, opt_cover(state.points, state.scale).count)


def _current_ratio(state):
    return ratio(state.on_cost, opt_cover(state.points, state.scale).count)


def _clamp(value, alpha, beta):
    return max(alpha, min(beta, value))


class ForcedRatioSearch:
    def __init__(self, config):
        self.config = config
        self.memo = {}
        self.explored = 0
        self.memo_hits = 0
        self.root_best = None
        self._limit = config.node_cap
        self._lock = threading.Lock()

    def _charge(self):
        with self._lock:
            self.explored += 1
            explored = self.explored
        if explored > self._limit:
            raise ResourceLimitError(self.config.node_cap, explored)
        if explored % self.config.progress_every == 0:
            logger.info(f"{explored} nodes explored, current bound {format_ratio(self.root_best)}, "
                        f"{len(self.memo)} memo entries")

    def value(self, state, remaining, alpha=NEG, beta=INF):
        """ clamp(V(state, remaining), alpha, beta); exact V when pruning is off. """
        if not self.config.prune:
            alpha, beta = NEG, INF
        stop = _current_ratio(state) if state.points else NEG
        if remaining == 0:
            return _clamp(stop, alpha, beta)

        key = None
        if self.config.memo:
            key = (state_key(state), remaining)
            entry = self.memo.get(key)
            if entry is not None:
                lo, hi = entry
                if lo >= beta or hi <= alpha or lo == hi:
                    with self._lock:
                        self.memo_hits += 1
                    if lo >= beta:
                        return beta
                    if hi <= alpha:
                        return alpha
                    return _clamp(lo, alpha, beta)

        self._charge()
        result = self._max_node(state, remaining, stop, alpha, beta)
        if key is not None:
            self._store(key, result, alpha, beta)
        return result

    def _store(self, key, result, alpha, beta):
        lo, hi = self.memo.get(key, (NEG, INF))
        if result >= beta:
            lo = max(lo, beta)
        elif result <= alpha:
            hi = min(hi, alpha)
        else:
            lo = hi = result
        self.memo[key] = (lo, hi)

    def _max_node(self, state, remaining, stop, alpha, beta):
        prune = self.config.prune
        best = max(alpha, stop)
        if best >= beta:
            return beta
        if prune and state.points and prune_bound(state, remaining) <= best:
            return best

        for p in candidate_points(state, self.config):
            if prune and state.points:
                bound = ratio(state.on_cost + remaining, opt_cover(state.points + (p,), state.scale).count)
                if bound <= best:
                    continue
            v = self.min_node(state, p, remaining, best if prune else NEG, beta)
            if v > best:
                best = v
                if best >= beta:
                    return beta
        return best

    def min_node(self, state, p, remaining, alpha=NEG, beta=INF):
        """ clamp(min over the algorithm's answers to point `p` of V, alpha, beta). Decisions leading to the same
        canonical state are evaluated once.
        """
        worst = beta
        seen = set()
        for decision in feasible_decisions(state, p):
            child = apply(state, p, decision)
            key = state_key(child)
            if key in seen:
                continue
            seen.add(key)
            v = self.value(child, remaining - 1, alpha, worst)
            if v < worst:
                worst = v
                if worst <= alpha:
                    return alpha
        return worst

    def search_root(self):
        """ :return: tuple (best value over completed root moves, number of completed root moves, aborted)

        Which root moves complete within the node cap depends on thread scheduling when `jobs > 1`, so a parallel
        pass that hits the cap is discarded and the root is searched again serially with a fresh memo and cap.
        """
        config = self.config
        state = OnState(scale=config.scale)
        beta = config.target if config.target is not None and config.prune else INF
        candidates = candidate_points(state, config)

        if config.jobs > 1:
            def task(p):
                try:
                    return self.min_node(state, p, config.max_points, NEG, beta)
                except ResourceLimitError:
                    return None

            tpool = ThreadPool(config.jobs)
            values = tpool.map(task, candidates)
            tpool.close()
            tpool.join()
            if None not in values:
                best = NEG
                for v in values:
                    best = max(best, v)
                    if best >= beta:
                        break
                self.root_best = best
                return best, len(values), False

            logger.warning(f"node cap of {config.node_cap} reached by parallel root moves, "
                           f"repeating the root search serially")
            self.memo = {}
            self._limit = self.explored + config.node_cap
        return self._search_root_serially(state, candidates, beta)

    def _search_root_serially(self, state, candidates, beta):
        config = self.config
        best, completed, aborted = NEG, 0, False
        for p in candidates:
            try:
                v = self.min_node(state, p, config.max_points, best if config.prune else NEG, beta)
            except ResourceLimitError:
                aborted = True
                break
            completed += 1
            if v > best:
                best = v
                self.root_best = best
                logger.debug(f"root move {format_position(p, config.scale)} forces {format_ratio(v)}")
                if best >= beta:
                    break
        return best, completed, aborted

    def build_strategy(self, target):
        """ Strategy tree forcing `target` from the empty state; every give branches on all feasible decisions.

        :raises ResourceLimitError: if the node cap is hit again while re-deriving the forcing moves
        """
        self._limit = self.explored + self.config.node_cap
        nodes = {}
        counters = {"give": 0, "leaf": 0}
        root = self._build(OnState(scale=self.config.scale), self.config.max_points, target, nodes, counters)
        return validate_tree(StrategyTree(scale=self.config.scale, root=root, nodes=nodes))

    def _build(self, state, remaining, target, nodes, counters):
        if state.points and _current_ratio(state) >= target:
            counters["leaf"] += 1
            leaf_id = f"L{counters['leaf']}"
            nodes[leaf_id] = LeafNode(leaf_id, LeafInfo(leaf_id, _current_ratio(state)))
            return leaf_id

        p = self._forcing_point(state, remaining, target)
        counters["give"] += 1
        give_id = f"n{counters['give']}"
        nodes[give_id] = None  # keeps nodes in pre-order
        branches = []
        for decision in feasible_decisions(state, p):
            if decision.is_open:
                label = f"c{len(state.clusters) + 1}"
                matcher = OpenAs(label)
            else:
                label = None
                matcher = AssignTo(state.clusters[decision.cluster_id].label)
            child = apply(state, p, decision, label)
            branches.append(Branch(matcher, self._build(child, remaining - 1, target, nodes, counters)))
        nodes[give_id] = GiveNode(give_id, p, tuple(branches))
        return give_id

    def _forcing_point(self, state, remaining, target):
        if remaining > 0:
            for p in candidate_points(state, self.config):
                if self.min_node(state, p, remaining, NEG, target) >= target:
                    return p
        raise RuntimeError(f"no move forces {format_ratio(target)} with {remaining} points left")


def best_forced_ratio(config):
    """ Largest ratio the adversary can force within `config`, with a strategy tree forcing it.

    With a target the search stops as soon as the target is forced and reports min(V, target). When the node
    cap is hit the value is the best over the completed root moves, a valid but possibly non-optimal lower bound,
    and `exhaustive` is False.

    :param config: :class:`SearchConfig`
    :return: :class:`SearchResult`
    """
    search = ForcedRatioSearch(config)
    logger.info(f"searching scale={config.scale} grid_step={config.grid_step} window={config.window} "
                f"max_points={config.max_points} target={format_ratio(config.target)} jobs={config.jobs}")
    best, completed, aborted = search.search_root()
    if aborted:
        logger.warning(f"node cap of {config.node_cap} reached after {completed} completed root moves")

    if completed == 0 or best <= 0:
        return SearchResult(Fraction(0), None, search.explored, search.memo_hits, exhaustive=False,
                            target_met=False if config.target is not None else None)

    value = Fraction(best)
    if config.target is not None:
        value = min(value, config.target)

    strategy = None
    try:
        strategy = search.build_strategy(value)
    except ResourceLimitError:
        logger.warning("node cap reached while building the strategy tree, no tree emitted")

    logger.info(f"forced ratio {format_ratio(value)} ({search.explored} nodes, {search.memo_hits} memo hits)")
    return SearchResult(value, strategy, search.explored, search.memo_hits, exhaustive=not aborted,
                        target_met=value >= config.target if config.target is not None else None)

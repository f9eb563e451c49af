# -*- coding: utf-8 -*-
""" Offline optimum C_OPT: minimum number of unit clusters covering a point multiset. """

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from online_unit_clustering.errors import BruteForceLimitError, UndefinedRatioError
from online_unit_clustering.util import DEFAULT_SCALE

logger = logging.getLogger("OfflineOpt")

MAX_BRUTEFORCE_POINTS = 20


@dataclass(frozen=True)
class OptResult:
    count: int
    intervals: Tuple[Tuple[int, int], ...]


def distinct_sorted(points):
    """ Duplicated points never change C_OPT, so every cover works on the sorted distinct positions.

    Positions are unbounded Python ints, so the array keeps object dtype instead of a fixed-width integer type.
    """
    if len(points) == 0:
        return []
    return np.unique(np.array(points, dtype=object)).tolist()


def opt_cover(points, scale=DEFAULT_SCALE):
    """ Greedy sweep: place a closed unit interval at the leftmost uncovered point until all points are covered.
    Optimal for covering points on a line with unit intervals.

    :param points: scaled positions (a multiset, any order)
    :param scale: scaled steps per unit length
    :return: :class:`OptResult`
    """
    intervals = []
    for p in distinct_sorted(points):
        if intervals and p <= intervals[-1][1]:
            continue
        intervals.append((p, p + scale))
    return OptResult(len(intervals), tuple(intervals))


def opt_bruteforce(points, scale=DEFAULT_SCALE):
    """ Independent oracle for :func:`opt_cover`.

    Some optimal cover always splits the sorted points into consecutive groups of span at most one unit, so
    best[j] = min(best[i] + 1) over all groups points[i:j] that fit into one cluster.

    :raises BruteForceLimitError: for more than 20 distinct points
    """
    distinct = distinct_sorted(points)
    if len(distinct) > MAX_BRUTEFORCE_POINTS:
        raise BruteForceLimitError(f"brute force refuses {len(distinct)} distinct points "
                                   f"(at most {MAX_BRUTEFORCE_POINTS})")

    best = [0] + [None] * len(distinct)
    for j in range(1, len(distinct) + 1):
        for i in range(j):
            if distinct[j - 1] - distinct[i] > scale:
                continue
            candidate = best[i] + 1
            if best[j] is None or candidate < best[j]:
                best[j] = candidate
    return best[len(distinct)]


def ratio(on_cost, opt_cost):
    if opt_cost == 0:
        raise UndefinedRatioError(f"ratio {on_cost}/0 is undefined")
    return Fraction(on_cost, opt_cost)


def cross_check_opt(trials=1000, max_points=12, max_coordinate=15, scale=DEFAULT_SCALE, seed=0):
    """ Compares :func:`opt_cover` with :func:`opt_bruteforce` on random multisets.

    :param trials: number of random multisets
    :param max_points: multiset sizes are drawn from [0, max_points]
    :param max_coordinate: coordinates are drawn from the 1/scale grid on [0, max_coordinate]
    :param seed: seed of the numpy generator
    :return: list of (points, greedy count, brute force count) for every mismatch
    """
    rng = np.random.default_rng(seed)
    mismatches = []
    for _ in range(trials):
        n = int(rng.integers(0, max_points + 1))
        points = rng.integers(0, max_coordinate * scale + 1, size=n).tolist()
        greedy = opt_cover(points, scale).count
        brute = opt_bruteforce(points, scale)
        if greedy != brute:
            mismatches.append((points, greedy, brute))
    logger.info(f"OPT cross check: {trials} multisets, {len(mismatches)} mismatches")
    return mismatches

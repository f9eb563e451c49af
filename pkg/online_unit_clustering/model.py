# -*- coding: utf-8 -*-
""" Cluster and state model of one-dimensional online unit clustering.

Positions are integers on a grid of 1/`scale` steps, so one unit length equals `scale` steps and every
comparison is exact integer arithmetic. Clusters start degenerate at the point they are opened for and
grow lazily, only as far as needed to cover the points assigned to them.
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

from online_unit_clustering.errors import IllegalMoveError
from online_unit_clustering.util import DEFAULT_SCALE, format_position


@dataclass(frozen=True)
class Cluster:
    id: int
    lo: int
    hi: int
    label: Optional[str] = None

    @property
    def name(self):
        return self.label if self.label is not None else f"#{self.id}"

    def covers(self, p):
        return self.lo <= p <= self.hi

    def extended(self, p):
        return replace(self, lo=min(self.lo, p), hi=max(self.hi, p))


@dataclass(frozen=True)
class Decision:
    """ Either open a new cluster at the given point (`cluster_id` is None) or assign it to an existing cluster. """
    cluster_id: Optional[int] = None

    @property
    def is_open(self):
        return self.cluster_id is None

    def __str__(self):
        return "open" if self.is_open else f"assign:#{self.cluster_id}"


OPEN = Decision()


def assign(cluster_id):
    return Decision(cluster_id)


@dataclass(frozen=True)
class OnState:
    """ Full game state: the algorithm's clusters (index == id == creation order), the points given so far and
    the cluster id each point occurrence was assigned to.
    """
    scale: int = DEFAULT_SCALE
    clusters: Tuple[Cluster, ...] = ()
    points: Tuple[int, ...] = ()
    assignment: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError(f"scale must be a positive integer, got {self.scale}")
        if len(self.points) != len(self.assignment):
            raise ValueError("every point occurrence needs exactly one assigned cluster")
        for index, cluster in enumerate(self.clusters):
            if cluster.id != index:
                raise ValueError(f"cluster ids must follow creation order, got id {cluster.id} at {index}")
            if not 0 <= cluster.hi - cluster.lo <= self.scale:
                raise ValueError(f"cluster {cluster.name} violates lo <= hi <= lo + 1")

    @property
    def unit(self):
        return self.scale

    @property
    def on_cost(self):
        return len(self.clusters)

    def cluster_by_label(self, label):
        for cluster in self.clusters:
            if cluster.label == label:
                return cluster
        return None

    def covering(self, p):
        return [cluster for cluster in self.clusters if cluster.covers(p)]

    def coordinates(self):
        return [c.lo for c in self.clusters] + [c.hi for c in self.clusters] + list(self.points)


def decision_token(state, decision):
    """ Replayable text form of a decision: "open" or "assign:<cluster name>". """
    if decision.is_open:
        return "open"
    return f"assign:{state.clusters[decision.cluster_id].name}"


def resolve_cluster(state, name, step=None):
    """ Looks a cluster up by label, or by "#<id>" for unlabelled clusters. """
    if name.startswith("#"):
        try:
            return state.clusters[int(name[1:])]
        except (ValueError, IndexError):
            pass
    else:
        cluster = state.cluster_by_label(name)
        if cluster is not None:
            return cluster
    raise IllegalMoveError(f"unknown cluster '{name}'", step=step)


def reach(cluster, unit=DEFAULT_SCALE):
    """ All points the cluster could still be extended to cover, as the closed interval (hi - 1, lo + 1). """
    return cluster.hi - unit, cluster.lo + unit


def can_assign(cluster, p, unit=DEFAULT_SCALE):
    return max(cluster.hi, p) - min(cluster.lo, p) <= unit


def feasible_decisions(state, p):
    """ The decisions a lazy online algorithm may take for point `p`, ordered open first, then by cluster id.

    A point inside existing clusters is free: only the assignments to the covering clusters are returned.

    :param state: current :class:`OnState`
    :param p: scaled position of the new point
    :return: tuple of :class:`Decision`
    """
    covering = state.covering(p)
    if covering:
        return tuple(assign(c.id) for c in covering)
    return (OPEN,) + tuple(assign(c.id) for c in state.clusters if can_assign(c, p, state.unit))


def apply(state, p, decision, label=None):
    """ Feeds point `p` to the state with the given decision and returns the successor state.

    :param label: name bound to the new cluster when `decision` opens one
    :raises IllegalMoveError: if `decision` is not feasible for `p`
    """
    if decision not in feasible_decisions(state, p):
        raise IllegalMoveError(f"decision '{decision}' is not feasible for point "
                               f"{format_position(p, state.scale)}")

    clusters = list(state.clusters)
    if decision.is_open:
        cluster_id = len(clusters)
        clusters.append(Cluster(cluster_id, p, p, label))
    else:
        cluster_id = decision.cluster_id
        clusters[cluster_id] = clusters[cluster_id].extended(p)

    return replace(state, clusters=tuple(clusters), points=state.points + (p,),
                   assignment=state.assignment + (cluster_id,))


def translate(state, t):
    clusters = tuple(replace(c, lo=c.lo + t, hi=c.hi + t) for c in state.clusters)
    return replace(state, clusters=clusters, points=tuple(p + t for p in state.points))


def canonicalize(state):
    """ Translation and creation-order normal form of a state, used for memo keys and duplicate detection.

    The minimum coordinate is moved to 0, clusters are sorted by (lo, hi, creation id) and renumbered in that
    order; point occurrences are sorted by (position, new cluster id).

    :return: tuple (canonical state, offset) with state == translate(canonical, offset) up to renumbering
    """
    coordinates = state.coordinates()
    offset = min(coordinates) if coordinates else 0
    order = sorted(state.clusters, key=lambda c: (c.lo, c.hi, c.id))
    new_id = {c.id: i for i, c in enumerate(order)}
    clusters = tuple(Cluster(i, c.lo - offset, c.hi - offset, c.label) for i, c in enumerate(order))
    pairs = sorted((p - offset, new_id[cid]) for p, cid in zip(state.points, state.assignment))
    canonical = OnState(scale=state.scale, clusters=clusters,
                        points=tuple(p for p, _ in pairs), assignment=tuple(cid for _, cid in pairs))
    return canonical, offset


def state_key(state, labels=False):
    """ Hashable summary of everything that influences the future of a game: cluster extents and the point
    multiset (optionally the cluster labels). Assignments do not matter once a point is covered.
    """
    canonical, offset = canonicalize(state)
    if labels:
        clusters = tuple((c.lo, c.hi, c.label) for c in canonical.clusters)
    else:
        clusters = tuple((c.lo, c.hi) for c in canonical.clusters)
    return offset, clusters, canonical.points


def render_state(state):
    """ One line per cluster: name, extent and reach, e.g. "H [8.5, 9] reach [8, 9.5]". """
    lines = []
    for cluster in sorted(state.clusters, key=lambda c: (c.lo, c.hi, c.id)):
        r_lo, r_hi = reach(cluster, state.unit)
        lines.append(f"{cluster.name} [{format_position(cluster.lo, state.scale)}, "
                     f"{format_position(cluster.hi, state.scale)}] reach "
                     f"[{format_position(r_lo, state.scale)}, {format_position(r_hi, state.scale)}]")
    return "\n".join(lines)

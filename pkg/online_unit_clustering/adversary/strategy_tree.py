# -*- coding: utf-8 -*-
""" Adaptive adversary strategies as rooted DAGs.

A give node feeds one point and branches on the algorithm's observable answer, a volley node feeds a fixed
list of points without branching and ends the game, a leaf ends the game right away. Cluster labels are bound
when a branch matches a newly opened cluster and can be referred to further down the same root path.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from online_unit_clustering.errors import TreeValidationError
from online_unit_clustering.util import (DEFAULT_SCALE, format_position, format_ratio, parse_position,
                                         parse_ratio)

ANONYMOUS = "_"


@dataclass(frozen=True)
class OpenAs:
    label: Optional[str] = None  # None: open without naming the cluster

    def __str__(self):
        return f"open {self.label or ANONYMOUS}"


@dataclass(frozen=True)
class AssignTo:
    label: str

    def __str__(self):
        return f"assign {self.label}"


@dataclass(frozen=True)
class Otherwise:
    def __str__(self):
        return "otherwise"


OTHERWISE = Otherwise()

Matcher = Union[OpenAs, AssignTo, Otherwise]


@dataclass(frozen=True)
class Branch:
    matcher: Matcher
    child: str


@dataclass(frozen=True)
class LeafInfo:
    tag: str
    expected_min_ratio: Fraction


@dataclass(frozen=True)
class GiveNode:
    id: str
    pos: int
    branches: Tuple[Branch, ...]


@dataclass(frozen=True)
class VolleyNode:
    id: str
    points: Tuple[int, ...]
    leaf: LeafInfo


@dataclass(frozen=True)
class LeafNode:
    id: str
    leaf: LeafInfo


Node = Union[GiveNode, VolleyNode, LeafNode]


@dataclass(frozen=True)
class StrategyTree:
    scale: int
    root: str
    nodes: Dict[str, Node] = field(default_factory=dict)

    def node(self, node_id):
        try:
            return self.nodes[node_id]
        except KeyError:
            raise TreeValidationError("unknown node", node_id)

    def terminals(self):
        """ Volley and leaf nodes in definition order. """
        return [n for n in self.nodes.values() if not isinstance(n, GiveNode)]

    def give_nodes(self):
        return [n for n in self.nodes.values() if isinstance(n, GiveNode)]


def match_branch(give, state, decision):
    """ Resolves the algorithm's decision against the branches of a give node.

    Explicit matchers are tried in order before an `Otherwise` branch.

    :return: tuple (branch, label to bind to a newly opened cluster) or (None, None) if nothing matches
    """
    otherwise = None
    for branch in give.branches:
        matcher = branch.matcher
        if isinstance(matcher, Otherwise):
            otherwise = otherwise or branch
        elif isinstance(matcher, OpenAs) and decision.is_open:
            return branch, matcher.label
        elif isinstance(matcher, AssignTo) and not decision.is_open and \
                state.clusters[decision.cluster_id].label == matcher.label:
            return branch, None
    return otherwise, None


def validate_tree(tree):
    """ Checks a strategy tree for dangling references, cycles, label misuse and malformed nodes.

    :raises TreeValidationError: naming the offending node
    """
    if tree.scale < 1:
        raise TreeValidationError(f"scale must be positive, got {tree.scale}")
    tree.node(tree.root)

    for node in tree.nodes.values():
        if isinstance(node, GiveNode):
            if not node.branches:
                raise TreeValidationError("give node without branches", node.id)
            kinds = [type(b.matcher) for b in node.branches]
            if kinds.count(Otherwise) > 1 or kinds.count(OpenAs) > 1:
                raise TreeValidationError("more than one open or otherwise branch", node.id)
            for branch in node.branches:
                if branch.child not in tree.nodes:
                    raise TreeValidationError(f"branch '{branch.matcher}' points to unknown node "
                                              f"'{branch.child}'", node.id)
        elif isinstance(node, VolleyNode) and not node.points:
            raise TreeValidationError("volley without points", node.id)

    # walk every distinct (node, bound labels) pair; the grey set detects cycles
    visited = set()
    grey = set()

    def walk(node_id, bound):
        key = (node_id, bound)
        if node_id in grey:
            raise TreeValidationError("cycle detected", node_id)
        if key in visited:
            return
        node = tree.nodes[node_id]
        grey.add(node_id)
        if isinstance(node, GiveNode):
            for branch in node.branches:
                labels = bound
                matcher = branch.matcher
                if isinstance(matcher, AssignTo) and matcher.label not in bound:
                    raise TreeValidationError(f"reference to unbound label '{matcher.label}'", node_id)
                if isinstance(matcher, OpenAs) and matcher.label is not None:
                    if matcher.label in bound:
                        raise TreeValidationError(f"label '{matcher.label}' bound twice on one path", node_id)
                    labels = bound | frozenset([matcher.label])
                walk(branch.child, labels)
        grey.discard(node_id)
        visited.add(key)

    walk(tree.root, frozenset())
    return tree


def save_tree(tree):
    """ Serialises a strategy tree to its JSON text form (positions and ratios as exact strings). """
    nodes = {}
    for node_id, node in tree.nodes.items():
        if isinstance(node, GiveNode):
            nodes[node_id] = {"kind": "give", "pos": format_position(node.pos, tree.scale),
                              "branches": [{"match": _dump_matcher(b.matcher), "child": b.child}
                                           for b in node.branches]}
        elif isinstance(node, VolleyNode):
            nodes[node_id] = {"kind": "volley", "points": [format_position(p, tree.scale) for p in node.points],
                              "leaf": _dump_leaf(node.leaf)}
        else:
            nodes[node_id] = {"kind": "leaf", "leaf": _dump_leaf(node.leaf)}
    return json.dumps({"scale": tree.scale, "root": tree.root, "nodes": nodes}, indent=2) + "\n"


def load_tree(text):
    """ Parses and validates the JSON text form of a strategy tree.

    :raises TreeValidationError: for schema violations, off-grid positions, unknown labels or cycles
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise TreeValidationError(f"not valid JSON: {e}")
    if not isinstance(data, dict) or not isinstance(data.get("nodes"), dict):
        raise TreeValidationError("expected an object with 'scale', 'root' and 'nodes'")

    scale = data.get("scale", DEFAULT_SCALE)
    if not isinstance(scale, int) or isinstance(scale, bool):
        raise TreeValidationError(f"scale must be an integer, got {scale!r}")
    nodes = {}
    for node_id, raw in data["nodes"].items():
        try:
            nodes[node_id] = _load_node(node_id, raw, scale)
        except TreeValidationError:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise TreeValidationError(f"malformed node: {e}", node_id)

    return validate_tree(StrategyTree(scale=scale, root=str(data.get("root")), nodes=nodes))


def _load_node(node_id, raw, scale):
    kind = raw["kind"]
    if kind == "give":
        return GiveNode(node_id, parse_position(raw["pos"], scale),
                        tuple(Branch(_load_matcher(b["match"], node_id), str(b["child"])) for b in raw["branches"]))
    if kind == "volley":
        return VolleyNode(node_id, tuple(parse_position(p, scale) for p in raw["points"]), _load_leaf(raw["leaf"]))
    if kind == "leaf":
        return LeafNode(node_id, _load_leaf(raw["leaf"]))
    raise TreeValidationError(f"unknown node kind '{kind}'", node_id)


def _dump_matcher(matcher):
    if isinstance(matcher, OpenAs):
        return {"open": matcher.label or ANONYMOUS}
    if isinstance(matcher, AssignTo):
        return {"assign": matcher.label}
    return "otherwise"


def _load_matcher(raw, node_id):
    if raw == "otherwise":
        return OTHERWISE
    if isinstance(raw, dict) and len(raw) == 1:
        if "open" in raw:
            label = raw["open"]
            return OpenAs(None if label in (None, ANONYMOUS) else str(label))
        if "assign" in raw:
            return AssignTo(str(raw["assign"]))
    raise TreeValidationError(f"unknown matcher {raw!r}", node_id)


def _dump_leaf(leaf):
    return {"tag": leaf.tag, "expect": format_ratio(leaf.expected_min_ratio)}


def _load_leaf(raw):
    return LeafInfo(str(raw["tag"]), parse_ratio(raw["expect"]))

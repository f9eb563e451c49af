# -*- coding: utf-8 -*-
""" Builtin adversary strategies, addressed as "builtin:<name>". """

from fractions import Fraction

from online_unit_clustering.adversary.strategy_tree import (OTHERWISE, AssignTo, Branch, GiveNode, LeafInfo,
                                                            LeafNode, OpenAs, StrategyTree, VolleyNode,
                                                            validate_tree)
from online_unit_clustering.util import parse_position

BUILTIN_PREFIX = "builtin:"


def builtin_kk13():
    """ The adaptive 13/8 lower bound instance for one-dimensional online unit clustering (scale 10).

    The main line gives 3, 4, 5, 6, 2, 1, 0, 2.5, 7, 8, 8.5, 9, 10, 11, 9.5, 12, 13 and expects the clusters
    D D E F B B A C F G H H J J I K, then K or L. Every deviation ends in a volley or leaf whose ratio is at
    least 13/8. Assigning G at point 9 is feasible but not part of the main line; it continues exactly like
    assigning H.
    """
    scale = 10

    def give(node_id, pos, *branches):
        return GiveNode(node_id, parse_position(pos, scale), tuple(Branch(m, c) for m, c in branches))

    def volley(node_id, points, tag, expected):
        return VolleyNode(node_id, tuple(parse_position(p, scale) for p in points), LeafInfo(tag, expected))

    nodes = [
        give("n1", "3", (OpenAs("D"), "n2")),
        give("n2", "4", (AssignTo("D"), "n3"), (OpenAs(), "L1")),
        LeafNode("L1", LeafInfo("L1", Fraction(2, 1))),
        give("n3", "5", (OpenAs("E"), "n4")),
        give("n4", "6", (OpenAs("F"), "n5"), (AssignTo("E"), "L2")),
        volley("L2", ("2.5", "4.5", "6.5"), "L2", Fraction(5, 3)),
        give("n5", "2", (OpenAs("B"), "n6")),
        give("n6", "1", (AssignTo("B"), "n7"), (OpenAs(), "L3")),
        LeafNode("L3", LeafInfo("L3", Fraction(5, 3))),
        give("n7", "0", (OpenAs("A"), "n8")),
        give("n8", "2.5", (OpenAs("C"), "n9")),
        give("n9", "7", (AssignTo("F"), "n10"), (OpenAs(), "L4")),
        LeafNode("L4", LeafInfo("L4", Fraction(7, 4))),
        give("n10", "8", (OpenAs("G"), "n11")),
        give("n11", "8.5", (OpenAs("H"), "n12"), (AssignTo("G"), "L5")),
        volley("L5", ("4.5", "5.6", "7.4", "9.5"), "i", Fraction(10, 6)),
        give("n12", "9", (AssignTo("H"), "n13"), (OpenAs(), "L6"), (OTHERWISE, "n13")),
        LeafNode("L6", LeafInfo("L6", Fraction(9, 5))),
        give("n13", "10", (OpenAs("J"), "n14")),
        give("n14", "11", (AssignTo("J"), "n15"), (OpenAs(), "L7")),
        LeafNode("L7", LeafInfo("L7", Fraction(10, 6))),
        give("n15", "9.5", (OpenAs("I"), "n16"), (AssignTo("H"), "L8")),
        volley("L8", ("4.5", "5.6", "7.2", "8.3", "9.7", "11.5"), "ii", Fraction(13, 8)),
        give("n16", "12", (OpenAs("K"), "n17")),
        give("n17", "13", (AssignTo("K"), "L9"), (OpenAs("L"), "L10")),
        volley("L9", ("11.5", "14"), "iii", Fraction(13, 8)),
        volley("L10", ("4.5", "5.6"), "iv", Fraction(13, 8)),
    ]
    return validate_tree(StrategyTree(scale=scale, root="n1", nodes={node.id: node for node in nodes}))


BUILTIN_TREES = {"kk13": builtin_kk13}


def builtin_tree(identifier):
    """ :param identifier: "builtin:<name>" or just "<name>" """
    name = identifier[len(BUILTIN_PREFIX):] if identifier.startswith(BUILTIN_PREFIX) else identifier
    try:
        return BUILTIN_TREES[name]()
    except KeyError:
        raise ValueError(f"unknown builtin tree '{identifier}', choose from "
                         f"{[BUILTIN_PREFIX + n for n in sorted(BUILTIN_TREES)]}")

from online_unit_clustering.adversary.strategy_tree import GiveNode, VolleyNode
from online_unit_clustering.util import format_position, format_ratio


def export_dot(tree, name="strategy"):
    """ Renders a strategy tree as a Graphviz digraph.

    Give nodes are boxes labelled with the given point, terminals are ellipses labelled with their tag, the
    volley points and the expected ratio. Edges carry the matcher text; children shared by several branches
    show up as one node with several incoming edges.
    """
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    edges = []
    for node in tree.nodes.values():
        if isinstance(node, GiveNode):
            lines.append(f'  "{node.id}" [shape=box, label="{node.id}\\ngive {format_position(node.pos, tree.scale)}"];')
            for branch in node.branches:
                edges.append(f'  "{node.id}" -> "{branch.child}" [label="{branch.matcher}"];')
        else:
            text = f"{node.id} ({node.leaf.tag})"
            if isinstance(node, VolleyNode):
                text += "\\nvolley " + ", ".join(format_position(p, tree.scale) for p in node.points)
            text += f"\\nexpect {format_ratio(node.leaf.expected_min_ratio)}"
            lines.append(f'  "{node.id}" [shape=ellipse, label="{text}"];')
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"

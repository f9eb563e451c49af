import logging

from online_unit_clustering.adversary.strategy_tree import GiveNode, VolleyNode, match_branch
from online_unit_clustering.algorithms.scripted_algorithm import ScriptedAlgorithm
from online_unit_clustering.algorithms.simulation import decide_checked
from online_unit_clustering.errors import TreeIncompleteError
from online_unit_clustering.model import OnState, decision_token
from online_unit_clustering.trace import Trace, record_step
from online_unit_clustering.util import format_position

logger = logging.getLogger("Playback")


def play(tree, algorithm):
    """ Plays an adversary strategy tree against one online algorithm.

    At a give node the algorithm's decision selects the branch (explicit matchers before `Otherwise`), at a
    volley all points are fed and the algorithm decides freely; the game ends at the volley or leaf.

    :param tree: :class:`StrategyTree`
    :param algorithm: :class:`OnlineAlgorithm`
    :return: :class:`Trace` ending at the reached leaf
    :raises TreeIncompleteError: if a feasible decision matches no branch
    :raises IllegalMoveError: if the algorithm answers with an infeasible decision
    """
    state = OnState(scale=tree.scale)
    events = []
    covered_gives = []
    node = tree.node(tree.root)

    while isinstance(node, GiveNode):
        step = len(state.points) + 1
        if state.covering(node.pos):
            logger.warning(f"node '{node.id}' gives {format_position(node.pos, tree.scale)} which is already "
                           f"covered")
            covered_gives.append(step)
        decision = decide_checked(algorithm, state, node.pos, step)
        branch, label = _match(node, state, decision, step)
        state, event = record_step(state, node.pos, decision, label)
        events.append(event)
        node = tree.node(branch.child)

    if isinstance(node, VolleyNode):
        for p in node.points:
            decision = decide_checked(algorithm, state, p, len(state.points) + 1)
            state, event = record_step(state, p, decision)
            events.append(event)

    logger.info(f"{algorithm.name} reached leaf '{node.id}' ({node.leaf.tag}) with C_ON={state.on_cost}")
    return Trace(scale=tree.scale, events=tuple(events), leaf_id=node.id, leaf_tag=node.leaf.tag,
                 covered_gives=tuple(covered_gives), final_state=state)


def replay_witness(tree, witness):
    """ Replays a decision list (e.g. the witness of a verification report) through the tree. """
    return play(tree, ScriptedAlgorithm(witness))


def _match(node, state, decision, step):
    branch, label = match_branch(node, state, decision)
    if branch is None:
        raise TreeIncompleteError(node.id, decision_token(state, decision), step=step)
    return branch, label

import logging

from online_unit_clustering.errors import IllegalMoveError
from online_unit_clustering.model import OnState, feasible_decisions
from online_unit_clustering.trace import Trace, record_step
from online_unit_clustering.util import DEFAULT_SCALE

logger = logging.getLogger("Simulation")


def decide_checked(algorithm, state, p, step):
    """ Asks the algorithm for its decision and rejects anything outside the feasible set. """
    decision = algorithm.decide(state, p)
    if decision not in feasible_decisions(state, p):
        raise IllegalMoveError(f"algorithm '{algorithm.name}' returned infeasible decision '{decision}'", step=step)
    return decision


def run(algorithm, points, scale=DEFAULT_SCALE):
    """ Feeds `points` one by one to `algorithm`.

    :param algorithm: an :class:`OnlineAlgorithm`
    :param points: sequence of scaled positions
    :param scale: scaled steps per unit length
    :return: :class:`Trace` with per-step costs and running ratio
    """
    state = OnState(scale=scale)
    events = []
    for step, p in enumerate(points, start=1):
        decision = decide_checked(algorithm, state, p, step)
        state, event = record_step(state, p, decision)
        events.append(event)
    logger.debug(f"{algorithm.name} on {len(events)} points: C_ON={state.on_cost}")
    return Trace(scale=scale, events=tuple(events), final_state=state)

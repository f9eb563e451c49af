from online_unit_clustering.algorithms.online_algorithm_base import OnlineAlgorithm
from online_unit_clustering.errors import IllegalMoveError
from online_unit_clustering.model import OPEN, assign, resolve_cluster


class ScriptedAlgorithm(OnlineAlgorithm):
    """ Replays a fixed decision list, e.g. a verifier witness.

    Tokens are "open" or "assign:<cluster>" where <cluster> is a label or "#<id>". The i-th token answers the
    i-th point, so the position in the script is derived from the state and the instance stays stateless.
    """
    name = "scripted"

    def __init__(self, tokens):
        self.tokens = tuple(tokens)

    def decide(self, state, p):
        step = len(state.points)
        if step >= len(self.tokens):
            raise IllegalMoveError(f"script of {len(self.tokens)} decisions is exhausted", step=step + 1)
        token = self.tokens[step]
        if token == "open":
            return OPEN
        if token.startswith("assign:"):
            return assign(resolve_cluster(state, token[len("assign:"):], step + 1).id)
        raise IllegalMoveError(f"unknown decision token '{token}'", step=step + 1)

from online_unit_clustering.algorithms.online_algorithm_base import OnlineAlgorithm
from online_unit_clustering.model import OPEN, feasible_decisions


class GreedyAlgorithm(OnlineAlgorithm):
    """ Never opens a cluster while some existing cluster can take the point; among those it picks the cluster
    with the smallest left end (ties by creation id).
    """
    name = "greedy"

    def decide(self, state, p):
        assignable = [d for d in feasible_decisions(state, p) if not d.is_open]
        if not assignable:
            return OPEN
        return min(assignable, key=lambda d: (state.clusters[d.cluster_id].lo, d.cluster_id))

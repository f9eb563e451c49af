from online_unit_clustering.algorithms.online_algorithm_base import OnlineAlgorithm
from online_unit_clustering.model import OPEN, assign


def home_cell(position, unit):
    # floor division on scaled integers, also correct for negative positions
    return position // unit


class GridAlgorithm(OnlineAlgorithm):
    """ The classical 2-competitive strategy: the line is cut into unit cells [k, k + 1) and every cell gets
    at most one cluster, opened by the first point falling into it. Clusters never cross a cell boundary, so
    a cluster's cell is the cell of its left end and no extra bookkeeping is needed.
    """
    name = "grid"

    def decide(self, state, p):
        cell = home_cell(p, state.unit)
        for cluster in state.clusters:
            if home_cell(cluster.lo, state.unit) == cell:
                return assign(cluster.id)
        return OPEN

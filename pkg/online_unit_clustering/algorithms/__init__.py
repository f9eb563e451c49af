from online_unit_clustering.algorithms.greedy_algorithm import GreedyAlgorithm
from online_unit_clustering.algorithms.grid_algorithm import GridAlgorithm

ALGORITHMS = {algorithm.name: algorithm for algorithm in (GreedyAlgorithm, GridAlgorithm)}


def get_algorithm(name):
    try:
        return ALGORITHMS[name]()
    except KeyError:
        raise ValueError(f"unknown algorithm '{name}', choose from {sorted(ALGORITHMS)}")

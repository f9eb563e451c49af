from abc import ABC, abstractmethod


class OnlineAlgorithm(ABC):
    """ A deterministic online algorithm in the lazy extension model.

    `decide` sees everything a deterministic online algorithm may legally use (its own clusters and all past
    points) and must return one of `feasible_decisions(state, p)`. Implementations keep no hidden mutable
    state, so identical (state, point) pairs always yield identical decisions.
    """
    name = None

    @abstractmethod
    def decide(self, state, p):
        """
        :param state: current :class:`online_unit_clustering.model.OnState`
        :param p: scaled position of the new point
        :return: :class:`online_unit_clustering.model.Decision`
        """
        pass

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r})"

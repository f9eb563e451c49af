class OnlineClusteringError(Exception):
    """ Base class of all errors raised by this package. """


class OffGridError(OnlineClusteringError, ValueError):
    def __init__(self, text, scale):
        super().__init__(f"coordinate '{text}' is not a multiple of 1/{scale}")
        self.text = text
        self.scale = scale


class IllegalMoveError(OnlineClusteringError, ValueError):
    """ An online algorithm returned a decision outside the feasible set. """

    def __init__(self, message, step=None):
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)
        self.step = step


class UndefinedRatioError(OnlineClusteringError, ZeroDivisionError):
    pass


class TreeValidationError(OnlineClusteringError, ValueError):
    def __init__(self, message, node_id=None):
        if node_id is not None:
            message = f"node '{node_id}': {message}"
        super().__init__(message)
        self.node_id = node_id


class TreeIncompleteError(OnlineClusteringError, RuntimeError):
    """ No branch of a give node matches the decision the algorithm took. """

    def __init__(self, node_id, decision, step=None):
        super().__init__(f"node '{node_id}' has no branch matching decision '{decision}'"
                         + (f" at step {step}" if step is not None else ""))
        self.node_id = node_id
        self.decision = decision
        self.step = step


class ResourceLimitError(OnlineClusteringError, RuntimeError):
    def __init__(self, limit, explored):
        super().__init__(f"node cap of {limit} exceeded after exploring {explored} nodes")
        self.limit = limit
        self.explored = explored


class BruteForceLimitError(OnlineClusteringError, ValueError):
    pass

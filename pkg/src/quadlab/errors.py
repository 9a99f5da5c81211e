"""Exception hierarchy. CLI exit codes are attached to the three families."""


class QuadlabError(Exception):
    exit_code = 1


class InputError(QuadlabError, ValueError):
    """Malformed or unusable input (bad knot file, n too small, ...)."""

    exit_code = 2


class KnotFormatError(InputError):
    pass


class GeneralPositionError(InputError):
    pass


class NotEmbeddedError(InputError):
    pass


class DegeneracyError(QuadlabError):
    """The quadrisecant set is not finite or not well defined."""

    exit_code = 3


class InfiniteFamily(DegeneracyError):
    pass


class QuintisecantDetected(DegeneracyError):
    pass


class ConstructionError(QuadlabError):
    """A verify-and-shrink loop ran out of iterations."""

    exit_code = 4


class PlacementError(ConstructionError):
    pass


class ProjectionError(QuadlabError):
    pass


class CrossingCapExceeded(QuadlabError):
    pass

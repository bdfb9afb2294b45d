"""Exception hierarchy shared by all qclab modules."""


class QCLabError(Exception):
    """Base class for every error raised by qclab."""


class GridError(QCLabError):
    """Structural problem with a grid or with operands living on different grids."""


class ParameterError(QCLabError, ValueError):
    """An argument is outside the admissible range."""


class ContractViolation(QCLabError):
    """A documented precondition of an operation does not hold."""


class SingularityError(QCLabError):
    """A surface patch is not an immersion at some sample point."""


class ResolutionError(QCLabError):
    """The grid is too coarse for the requested diagnostic."""


class ConvergenceError(QCLabError):
    """An iterative method failed to reach its tolerance.

    Parameters
    ----------
    message : str
        Human readable description.
    history : list of float
        Residual after each iteration, in order.
    """

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history or [])


class ConfigError(QCLabError):
    """A scenario file is malformed or references unknown catalog entries."""

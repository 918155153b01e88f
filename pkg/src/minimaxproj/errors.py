"""Exception hierarchy shared by every module.

The CLI maps :class:`ConvergenceError` to exit status 2 and every other
:class:`MinimaxError` to exit status 1.
"""


class MinimaxError(Exception):
    """Base class for all library errors."""


class DomainError(MinimaxError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class EvaluationError(MinimaxError, ArithmeticError):
    """A function produced a non-finite value."""


class ValidationError(MinimaxError, ValueError):
    """Malformed input data (weights, atoms, JSON documents, ...)."""


class PreconditionError(MinimaxError, ValueError):
    """A documented precondition of an operation does not hold."""


class MembershipError(PreconditionError):
    """A point expected to lie in a maximizing set does not."""


class CardinalityError(PreconditionError):
    """A set has too few elements for the requested construction."""


class NumericalError(MinimaxError, ArithmeticError):
    """A linear solve was singular to working precision."""


class ConvergenceError(MinimaxError, RuntimeError):
    """An iterative solver ran out of iterations.

    ``result`` holds the last iterate so callers can inspect it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result

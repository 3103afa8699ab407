"""Exception hierarchy shared by all modules."""


class Regl4Error(Exception):
    """Base class for errors raised by regl4."""


class PreconditionError(Regl4Error, ValueError):
    """An input lies outside the domain of the requested quantity."""


class SingularInputError(PreconditionError):
    """The quantity has a pole (or a vanishing denominator) at the input.

    ``factor`` names the offending factor when known.
    """

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class ConvergenceError(Regl4Error, ArithmeticError):
    """A numerical procedure did not reach its tolerance within budget."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error

"""Exception hierarchy shared by all modules."""


class IteratedABError(Exception):
    """Base class for every error raised by this package."""


class DomainError(IteratedABError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class PoleError(DomainError):
    """Gamma function evaluated at zero or a negative integer."""


class ConvergenceError(IteratedABError, ArithmeticError):
    """A truncated series did not meet its tail bound within ``max_terms``."""


class MismatchError(IteratedABError, ValueError):
    """Two series with different base order or origin were combined."""


class AlignmentError(IteratedABError, ValueError):
    """An integration order is not an integer multiple of the series base order."""


class DiscriminantError(IteratedABError, ArithmeticError):
    """The quadratic equation for the leading coefficient has no real root."""


class ResonanceError(IteratedABError, ArithmeticError):
    """The coefficient recurrence has a vanishing denominator."""


class SingularDenominatorError(IteratedABError, ArithmeticError):
    """``C + (B/(1-alpha))**beta`` vanishes in the relaxation equation."""


class LinearDegenerateError(IteratedABError, ValueError):
    """Quadratic solver called with ``R == 0``; use :func:`solve_linear`."""


class BoundViolation(IteratedABError, AssertionError):
    """An operator norm ratio exceeded the proven bound constant."""

    def __init__(self, message, function=None, ratio=None, bound=None):
        super().__init__(message)
        self.function = function
        self.ratio = ratio
        self.bound = bound

"""Exception types raised across the package."""


class QuantVolError(Exception):
    """Base class for all library errors."""


class NotFullDimensional(QuantVolError, ValueError):
    pass


class NotReflexive(QuantVolError, ValueError):
    pass


class ResourceLimit(QuantVolError, RuntimeError):
    pass


class NonIntegralValue(QuantVolError, ArithmeticError):
    pass


class InconsistentSamples(QuantVolError, ValueError):
    pass


class IdentityViolation(QuantVolError, AssertionError):
    """A combinatorial identity failed to hold; always a bug, never bad input."""


class SingularVertex(QuantVolError, ValueError):
    pass


class SingularMatrix(QuantVolError, ValueError):
    pass


class ParseError(QuantVolError, ValueError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)

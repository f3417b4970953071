"""Exception types raised across the package."""


class UnsupportedSeries(ValueError):
    pass


class BadEpsilon(ValueError):
    pass


class EpsilonNotRankOne(ValueError):
    """epsilon = 1 is only accepted on rank-one data."""


class DenominatorVanishes(ZeroDivisionError):
    pass


class NotExpandable(ValueError):
    """A denominator factor has mixed-sign x-exponents."""


class NotEntire(ArithmeticError):
    def __init__(self, message, function=None):
        super().__init__(message)
        self.function = function


class EpsilonUnsupported(ValueError):
    pass


class FactorizationFailed(AssertionError):
    def __init__(self, message, residual=None, report=None):
        super().__init__(message)
        self.residual = residual
        self.report = report


class RatioTooLarge(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, position=0):
        super().__init__(f"{message} (at position {position})")
        self.position = position

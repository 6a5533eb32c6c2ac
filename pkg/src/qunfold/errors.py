"""Exception types raised across the package."""


class QunfoldError(Exception):
    """Base class for every error raised by qunfold."""


class DimensionMismatch(QunfoldError, ValueError):
    pass


class NotSquare(QunfoldError, ValueError):
    pass


class NotHermitian(QunfoldError, ValueError):
    pass


class NoConvergence(QunfoldError, ArithmeticError):
    pass


class DomainError(QunfoldError, ValueError):
    """A scalar function produced a non-finite value on its argument."""


class BadDimension(QunfoldError, ValueError):
    pass


class InvalidState(QunfoldError, ValueError):
    """A value violates the invariants of its domain type."""


class NotNormalized(QunfoldError, ValueError):
    pass


class DegenerateDenominator(QunfoldError, ArithmeticError):
    pass


class StepTooLarge(QunfoldError, ValueError):
    """A finite-difference curve left the faithful region."""


class ConfigError(QunfoldError, ValueError):
    pass

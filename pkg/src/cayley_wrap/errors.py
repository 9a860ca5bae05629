"""Exception hierarchy shared by all modules."""


class CayleyWrapError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(CayleyWrapError, ValueError):
    """An argument broke a documented precondition (level mismatch, bad index, ...)."""


class NumericError(CayleyWrapError, ArithmeticError):
    """A numerically undefined operation was requested."""


class DivisionByZeroError(NumericError, ZeroDivisionError):
    pass


class DomainError(NumericError):
    """Input outside the domain of a function, e.g. Ln(0)."""


class BranchCutError(DomainError):
    """The principal logarithm was evaluated on (or crossed) its branch cut.

    ``location`` carries whatever identifies the offending sample, if known.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class CoverageError(CayleyWrapError):
    """A loop point is not covered by the chart assigned to its segment."""


class UnsupportedLevelError(ContractViolation):
    pass

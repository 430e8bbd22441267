"""Exception hierarchy shared by all modules."""


class QESError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 3


class UndefinedResultantError(QESError, ValueError):
    pass


class NotADivisorError(QESError, ArithmeticError):
    """Exact division left a nonzero remainder (a legitimate negative answer)."""


class RationalEntryError(QESError, ValueError):
    pass


class CouplingError(QESError, ValueError):
    pass


class ScalingError(QESError, ValueError):
    pass


class DegenerateRootError(QESError, ArithmeticError):
    pass


class DivergedError(QESError, ArithmeticError):
    pass


class EliminationError(QESError, RuntimeError):
    pass


class BudgetExceededError(EliminationError):
    """An elimination exceeded its degree or term budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial or {}


class NoTabulatedDataError(QESError, KeyError):
    pass

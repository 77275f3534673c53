"""Exception hierarchy shared by the simulation, analytics and estimation layers."""


class TsabmError(Exception):
    """Base class for all package errors."""


class ValidationError(TsabmError, ValueError):
    """Invalid parameters or malformed input."""


class DomainError(ValidationError):
    """Argument outside the real domain of a transform or formula."""


class NumericalError(TsabmError, ArithmeticError):
    """Base for failures of a numerical procedure."""


class QuadratureError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class FitError(NumericalError):
    pass


class OptimizationError(NumericalError):
    pass


class OverflowGuard(NumericalError):
    """Empirical transform would overflow for the requested argument."""


class NoConstantPeriods(FitError):
    """Series has too few constant runs for the waiting-time decomposition."""


class ParseError(ValidationError):
    pass


class GridError(ValidationError):
    pass


class ShapeError(ValidationError):
    pass


class InsufficientPaths(UserWarning):
    """Ensemble statistics requested from fewer than two trajectories."""

"""Exception and warning types shared across the package."""


class LieoscError(Exception):
    """Base class for all package errors."""


class ParameterError(LieoscError, ValueError):
    """A physical or numerical parameter is outside its valid domain."""


class UnboundedResonanceError(ParameterError):
    """Undamped drive exactly at the natural frequency has no steady state."""


class OverdampedError(ParameterError):
    """Requested quantity only exists for underdamped motion."""


class ExpressionError(LieoscError, ValueError):
    """Problem in a coefficient expression; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


class ExpressionSyntaxError(ExpressionError):
    pass


class UnknownIdentifierError(ExpressionError):
    pass


class EvaluationError(LieoscError, ArithmeticError):
    """Runtime failure while evaluating a time function (e.g. division by zero)."""


class IntegrationError(LieoscError, RuntimeError):
    """ODE integration failed; ``time`` is where the integrator gave up."""

    def __init__(self, message: str, time: float):
        self.time = time
        super().__init__(f"{message} (t={time:.6g})")


class DivergenceError(LieoscError, RuntimeError):
    """A transformation parameter or auxiliary function hit a pole."""

    def __init__(self, message: str, time: float | None = None):
        self.time = time
        super().__init__(message if time is None else f"{message} (t={time:.6g})")


class ResolutionError(LieoscError, RuntimeError):
    """The grid cannot represent the requested state faithfully."""


class ConfigError(LieoscError, ValueError):
    """Invalid scenario configuration; ``path`` names the offending key."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class PhaseStepWarning(RuntimeWarning):
    """Phase accumulated per split step exceeds pi/4."""


class TruncatedMomentsWarning(RuntimeWarning):
    """Moments computed over the grid window of a non-normalizable state."""


class WellPoleWarning(RuntimeWarning):
    """Accelerated-boundary frequency diagnostic is at its L=1 pole."""

"""Exception hierarchy.

Errors split into two families so the CLI can map them onto exit codes:
``ValidationError`` (bad input, exit 2) and ``NumericalError`` (the input was
well formed but the computation cannot proceed, exit 3).
"""


class ToolkitError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(ToolkitError, ValueError):
    pass


class NumericalError(ToolkitError, ArithmeticError):
    pass


class DimensionError(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class NotUnitaryError(ValidationError):
    pass


class UnorientedError(ValidationError):
    pass


class EmptySurfaceError(ValidationError):
    pass


class EmptyCellError(ValidationError):
    pass


class TooCloseToCurveError(ValidationError):
    pass


class LoopCrossesCurveError(ValidationError):
    pass


class DegenerateSubspaceError(NumericalError):
    def __init__(self, message, simplex=None):
        if simplex is not None:
            message = f"simplex {simplex}: {message}"
        super().__init__(message)
        self.simplex = simplex


class PhaseUndefinedError(NumericalError):
    pass


class EvaluationError(NumericalError):
    def __init__(self, message, location=None):
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)
        self.location = location


class NonIntegerResidualError(NumericalError):
    pass

"""Exception hierarchy.

Numerical failures share :class:`NumericalError` so callers (the CLI in
particular) can map them to a single exit code.
"""


class DmapError(Exception):
    """Base class for all package errors."""


class ParseError(DmapError, ValueError):
    """A points file could not be parsed."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class DegenerateCloudError(DmapError, ValueError):
    pass


class CapacityError(DmapError, MemoryError):
    pass


class InsufficientDataError(DmapError, ValueError):
    pass


class UnsupportedInputError(DmapError, ValueError):
    pass


class NumericalError(DmapError, ArithmeticError):
    pass


class DisconnectedGraphError(NumericalError):
    pass


class EigensolverError(NumericalError):
    pass


class StepSizeBlowupError(NumericalError):
    pass

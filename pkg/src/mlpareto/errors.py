"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Two inputs disagree on the number of nodes."""


class DegeneratePartitionError(ValueError):
    """A bipartition has an empty part."""


class SizeError(ValueError):
    """Graph too small for the requested operation."""


class EmptyInputError(ValueError):
    pass


class InsufficientHistoryError(ValueError):
    """Requested day precedes a full correlation window."""


class FormatError(ValueError):
    """Input text does not follow the expected file format."""

    def __init__(self, message, line_numbers=()):
        super().__init__(message)
        self.line_numbers = list(line_numbers)


class ConvergenceError(RuntimeError):
    """Iterative eigensolver stopped before meeting its tolerance."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual

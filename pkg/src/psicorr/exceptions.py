"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage errors -> 1, data errors -> 2,
numeric degeneracies -> 3.
"""


class PsicorrError(Exception):
    """Base class for all package errors."""


class DataError(PsicorrError):
    """Malformed or unusable input data (non-numeric, ragged, too small)."""


class InsufficientSampleError(DataError):
    """Fewer observations than the operation requires."""


class DimensionError(DataError):
    """Matrix or data dimensions outside the supported range."""


class DegenerateVariableError(DataError):
    """A variable with zero sample variance (correlation undefined)."""

    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column} has zero variance")


class NumericError(PsicorrError):
    """Numeric degeneracy that is not a data-format problem."""


class NotSymmetricError(NumericError):
    """Matrix is not symmetric within tolerance."""


class NotPSDError(NumericError):
    """Matrix has an eigenvalue below the allowed negative tolerance."""


class SingularBlockError(NumericError):
    """A required submatrix is numerically singular."""


class NumericDegeneracyError(NumericError):
    """A formula produced a value outside its mathematically valid range."""


class InvalidParameterError(PsicorrError):
    """A model or algorithm parameter outside its valid range."""


class UnreachableTargetError(InvalidParameterError):
    """Requested coefficient value not achievable within the parameter range."""

    def __init__(self, target, max_achievable, message=None):
        self.target = target
        self.max_achievable = max_achievable
        super().__init__(
            message
            or f"target {target} unreachable; maximum achievable is {max_achievable:.6f}"
        )

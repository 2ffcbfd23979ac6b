"""Exception types shared across the package."""

from __future__ import annotations


class NetcoherenceError(Exception):
    """Base class for all package errors."""


class InvalidInputError(NetcoherenceError, ValueError):
    """Malformed input: non-finite values, bad shapes, unparseable text."""


class DimensionMismatchError(NetcoherenceError, ValueError):
    """Operands have incompatible sizes."""


class DegenerateInputError(NetcoherenceError, ValueError):
    """Input is degenerate for the requested operation (e.g. zero-norm channel)."""


class InvalidPermutationError(NetcoherenceError, ValueError):
    """Mapping is not a bijection on the node set."""


class InvalidThresholdError(NetcoherenceError, ValueError):
    """Detection threshold outside [0, 1]."""


class SingularMatrixError(NetcoherenceError):
    """Matrix is singular or too ill-conditioned to invert.

    Carries the determinant magnitude observed when the inversion was refused.
    """

    def __init__(self, message: str, det_magnitude: float = 0.0):
        super().__init__(message)
        self.det_magnitude = float(det_magnitude)


class SubmatrixSingularError(NetcoherenceError):
    """Principal submatrix required by a conditional update is not positive definite.

    ``indices`` names the offending 1-based node set.
    """

    def __init__(self, message: str, indices: tuple[int, ...] = ()):
        super().__init__(message)
        self.indices = tuple(indices)


class InfeasiblePartialMatrixError(NetcoherenceError):
    """Known entries admit no positive definite completion (operational check)."""


class ConvergenceError(NetcoherenceError):
    """Iterative completion failed to converge within the sweep budget.

    Carries the last sweep's maximum entry change and the last zero-pattern residual.
    """

    def __init__(self, message: str, last_change: float, residual: float):
        super().__init__(message)
        self.last_change = float(last_change)
        self.residual = float(residual)


class ExcessiveExclusionError(NetcoherenceError):
    """Too many Monte Carlo trials failed to score (rate above 1%)."""

    def __init__(self, message: str, excluded: int, requested: int):
        super().__init__(message)
        self.excluded = int(excluded)
        self.requested = int(requested)


class InternalConsistencyError(NetcoherenceError):
    """A value violated an internal invariant by more than roundoff allows."""


class ConfigError(NetcoherenceError, ValueError):
    """Experiment configuration file is invalid."""


class ChannelFileError(NetcoherenceError, ValueError):
    """Channel sample file failed to parse.

    Carries the file path plus 1-based line and column of the offending token.
    """

    def __init__(self, message: str, path: str = "", line: int = 0, column: int = 0):
        super().__init__(message)
        self.path = str(path)
        self.line = int(line)
        self.column = int(column)

"""Exception types shared across the package."""

from __future__ import annotations


class GridshareError(Exception):
    """Base class for all errors raised by this package."""


class DataError(GridshareError):
    """Invalid input data: schema violations, malformed cells, bad shapes."""


class ZeroComparisonError(GridshareError):
    """A comparison ratio would divide by zero.

    Raised when one side of a team pair has zero recorded wins and no
    smoothing constant was supplied. The fix is to pass epsilon > 0.
    """

    def __init__(self, message: str, pair: tuple[str, str] | None = None):
        super().__init__(message)
        self.pair = pair


class ConvergenceError(GridshareError):
    """An iterative solver did not converge within its iteration budget."""

    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual

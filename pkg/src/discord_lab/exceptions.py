"""Exception types raised across the package."""

from __future__ import annotations

import numpy as np


class GraphParseError(ValueError):
    """An edge-list source could not be turned into a valid graph."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DegenerateInputError(ValueError):
    """Input is well-formed but outside the domain where the result is defined."""


class ConvergenceError(RuntimeError):
    """An iterative method stopped before reaching its tolerance.

    The last iterate is kept on ``last`` so callers can inspect or reuse it.
    """

    def __init__(self, message: str, last: np.ndarray | None = None, steps: int = 0):
        super().__init__(message)
        self.last = last
        self.steps = steps


class NumericError(RuntimeError):
    """A convex solver failed to certify its tolerance.

    ``lower`` and ``upper`` bracket the optimal value with the best certificate found.
    """

    def __init__(self, message: str, lower: float = float("nan"), upper: float = float("nan")):
        super().__init__(message)
        self.lower = lower
        self.upper = upper

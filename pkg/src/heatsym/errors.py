"""Exception types shared across the toolkit."""

from __future__ import annotations


class ConvergenceError(RuntimeError):
    """Raised when an iterative routine cannot reach its requested tolerance.

    Carries the best value computed so far and the error estimate at the
    point of failure so callers can decide whether to accept it anyway.
    """

    def __init__(self, message: str, best: float | None = None,
                 estimate: float | None = None):
        super().__init__(message)
        self.best = best
        self.estimate = estimate


class EvaluationError(RuntimeError):
    """Raised when a user-supplied callable returns a non-finite value.

    ``where`` identifies the offending input so the failure can be traced
    back to a concrete evaluation point.
    """

    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = where


class StructureError(RuntimeError):
    """Raised when a scan does not find the sign structure it relies on.

    ``trace`` holds (point, value) pairs from the scan that failed, enough
    to diagnose a misconfigured window without rerunning it.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []

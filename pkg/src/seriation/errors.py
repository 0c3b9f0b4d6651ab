"""Structured failures raised by the seriation pipeline."""


class SeriationError(RuntimeError):
    """Algorithmic failure with a machine-readable reason and diagnostics.

    Reasons used by the ordering stage: ``too_many_components``,
    ``no_extremal``, ``no_continuation``, ``ambiguous_continuation``.
    """

    def __init__(self, reason: str, message: str, diagnostics: dict | None = None):
        super().__init__(f"{reason}: {message}")
        self.reason = reason
        self.diagnostics = diagnostics or {}


class ProjectionError(RuntimeError):
    """Alternating projection failed to converge; carries the residual."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class DegenerateSpectrumError(RuntimeError):
    """Spectral ordering is ill-posed (disconnected or degenerate spectrum)."""

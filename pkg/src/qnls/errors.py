"""Error conditions shared across the package.

Exact-arithmetic failures reuse the stdlib types (ZeroDivisionError,
OverflowError); everything domain-specific gets its own class so callers can
distinguish conditions without string matching.
"""

__all__ = [
    "OnWallError",
    "NoNextLabelError",
    "DegenerateSpectrumError",
    "NoConvergenceError",
    "UnsupportedRegimeError",
    "NotSymmetricError",
    "AmbiguousPiecewiseIntegralError",
]


class OnWallError(ValueError):
    """A point has two equal coordinates, so no open alcove contains it."""


class NoNextLabelError(ValueError):
    """No entry of the label tuple exceeds the given label."""


class DegenerateSpectrumError(ValueError):
    """Spectral parameters collide where a formula divides by a difference."""


class NoConvergenceError(RuntimeError):
    """Iteration failed to reach the requested residual."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class UnsupportedRegimeError(ValueError):
    """Parameters outside the supported regime (e.g. non-repulsive coupling)."""


class NotSymmetricError(ValueError):
    """An operator requiring a symmetric input received a non-symmetric one."""


class AmbiguousPiecewiseIntegralError(NotImplementedError):
    """The exact integral of this piecewise input is not representable.

    Raised when the segment decomposition of a directional integral depends
    on coordinate comparisons (sums of pairs) that the alcove ordering does
    not determine. Smooth inputs and all operator chains built here stay
    clear of this; a genuinely discontinuous input can hit it.
    """

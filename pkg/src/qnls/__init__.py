"""Exact computer algebra and verification tools for a one-dimensional
delta-interacting Bose gas: piecewise-exponential wavefunctions, the
integral-reflection and Dunkl-type operator calculus acting on them,
creation/annihilation chains, and a numeric Bethe-root solver.
"""

from .errors import (
    AmbiguousPiecewiseIntegralError,
    DegenerateSpectrumError,
    NoConvergenceError,
    NoNextLabelError,
    NotSymmetricError,
    OnWallError,
    UnsupportedRegimeError,
)
from .exact import GaussianRational, PhasedScalar
from .pwfun import (
    PWFunction,
    SlotSubstitution,
    Term,
    act_permutation,
    constant,
    differentiate,
    evaluate,
    evaluate_exact,
    from_global_terms,
    inner_product,
    integrate_direction,
    jump_residual,
    lift,
    plane_wave,
    restrict_boundary,
    step_multiply,
    substitute_slot,
    wall_restriction,
    zero,
)

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "PhasedScalar",
    "PWFunction",
    "Term",
    "SlotSubstitution",
    "plane_wave",
    "constant",
    "zero",
    "from_global_terms",
    "act_permutation",
    "step_multiply",
    "differentiate",
    "integrate_direction",
    "lift",
    "restrict_boundary",
    "substitute_slot",
    "evaluate",
    "evaluate_exact",
    "inner_product",
    "wall_restriction",
    "jump_residual",
    "OnWallError",
    "NoNextLabelError",
    "DegenerateSpectrumError",
    "NoConvergenceError",
    "UnsupportedRegimeError",
    "NotSymmetricError",
    "AmbiguousPiecewiseIntegralError",
    "__version__",
]

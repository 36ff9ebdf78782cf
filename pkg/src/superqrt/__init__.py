"""Exact computations for a four-dimensional QRT-type birational map:
dynamics and invariants, singularity patterns, a 17-fold blow-up tower,
the Picard lattice action, degree growth and recovery of invariants from
divisor classes."""

__version__ = "0.1.0"

from .divisor import BASIS, DivisorClass, parse_class
from .dynamics import I1, I2, PHI, PHI_INV, PSI, AffinePoint4, check_inverse_identity, check_invariant_identity

__all__ = [
    "__version__",
    "BASIS",
    "DivisorClass",
    "parse_class",
    "I1",
    "I2",
    "PHI",
    "PHI_INV",
    "PSI",
    "AffinePoint4",
    "check_inverse_identity",
    "check_invariant_identity",
]

"""Exception hierarchy for the semitoric engine."""
from __future__ import annotations


class SemitoricError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class DomainError(SemitoricError):
    """Input outside the mathematical domain of an operation."""

    code = "domain"


class ValidationError(SemitoricError):
    """A phase-space point or data structure violates its invariants."""

    code = "validation"


class DegenerateTransitionError(DomainError):
    """Parameter sits exactly at a Hamiltonian-Hopf transition value."""

    code = "degenerate-transition"


class DegenerateLevelError(DomainError):
    """Level (l, h) is on or too close to a separatrix."""

    code = "degenerate-level"


class SeparatrixPoleError(DegenerateLevelError):
    """A partial-fraction pole enters the real cycle (characteristic >= 1)."""

    code = "separatrix-pole"


class ConsistencyError(SemitoricError):
    """Two routes to the same quantity disagree beyond tolerance."""

    code = "consistency"


class ConvergenceError(SemitoricError):
    """An iterative numerical scheme failed to converge."""

    code = "convergence"


class ContourError(SemitoricError):
    """No admissible contour exists for the requested level."""

    code = "contour"


class InvalidMoveError(SemitoricError):
    """A polygon shear produced a non-convex result."""

    code = "invalid-move"


class AmbiguousMatchError(SemitoricError):
    """Polygon matching margin below the uniqueness threshold."""

    code = "ambiguous-match"


class UnsupportedOrderError(DomainError):
    """Requested series order exceeds what is implemented."""

    code = "unsupported-order"


class WindowError(DomainError):
    """Point outside the validity window of a local expansion."""

    code = "window"

"""Exception types shared across the package."""


class HybridiscError(Exception):
    """Base class for all package errors."""


class InvalidGeometry(HybridiscError):
    """Disc geometry is inconsistent (overlap, non-positive radius, s >= d, ...)."""


class UnsupportedGeometry(HybridiscError):
    """Geometry is valid but outside what this version handles (unequal radii pairs)."""


class PoleAtInfinity(HybridiscError):
    """The annulus point that maps to physical infinity was evaluated."""


class PoleInDisc(HybridiscError):
    """The physical point that maps to annulus infinity was evaluated."""


class DomainViolation(HybridiscError):
    """Evaluation point lies outside the function's domain (inside a disc, ...)."""


class ConvergenceFailure(HybridiscError):
    """A truncated series/product failed to reach the tolerance within max_terms."""


class UnderdeterminedSystem(HybridiscError):
    """Too few collocation points for the requested truncation."""


class DegenerateSystem(HybridiscError):
    """The least-squares matrix has no usable directions at the given tolerance."""


class InvalidInput(HybridiscError):
    """Malformed argument (empty coefficient list, bad header, ...)."""

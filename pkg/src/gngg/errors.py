"""Exception types raised by the library.  All derive from ``ValueError``."""

from __future__ import annotations


class GNGGError(ValueError):
    """Base class for library errors."""


class NotNormalizedError(GNGGError):
    pass


class UndefinedPhaseError(GNGGError):
    """A noncyclic phase is requested for (near-)orthogonal initial and final states."""

    def __init__(self, message: str, basis_index: int | None = None):
        super().__init__(message)
        self.basis_index = basis_index


class NotEigenstateError(GNGGError):
    pass


class DegenerateGateError(GNGGError):
    """The gate is proportional to the identity, so its eigenbasis is arbitrary."""


class NotARootError(GNGGError):
    pass


class UnrealizableTargetError(GNGGError):
    """The target cannot be realized as a genuinely noncyclic geometric gate."""


class TargetOutsideSurfaceError(UnrealizableTargetError):
    """No scanned two-pulse root reproduces the target eigen-axis."""

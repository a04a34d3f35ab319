"""Exception hierarchy shared by every spectraldet module."""

from __future__ import annotations


class SpectralDetError(Exception):
    """Base class for all numerical failures raised by spectraldet."""


class OnCutError(SpectralDetError):
    """An eigenvalue argument falls inside the excluded sliver of a branch cut."""


class PoleError(SpectralDetError):
    """A special function was evaluated at one of its poles."""


class DomainError(SpectralDetError, ValueError):
    """An argument lies outside the supported domain of an operation."""


class NoConvergence(SpectralDetError):
    """An iterative solver hit its iteration cap."""


class BoundaryZeroError(SpectralDetError):
    """A counting contour passes through (or too close to) a zero."""


class QuadratureError(SpectralDetError):
    """Phase tracking along a contour failed to resolve the winding."""


class UnsupportedConfig(SpectralDetError):
    """The requested solver cannot handle this configuration."""


class AgreementError(SpectralDetError):
    """Independent determinant paths disagree beyond tolerance."""

    def __init__(self, message: str, agreement: float):
        super().__init__(message)
        self.agreement = agreement

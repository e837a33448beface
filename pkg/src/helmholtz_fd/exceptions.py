# -*- coding: utf-8 -*-
"""Exceptions and warnings raised by ``helmholtz_fd``.

Every error derives from :class:`HelmholtzError`. Errors caused by the
experiment setup derive from :class:`ConfigurationError`, errors raised while
computing derive from :class:`NumericalError`. The command line interface maps
the two families onto distinct exit codes.
"""

__all__ = (
    'HelmholtzError', 'ConfigurationError', 'NumericalError', 'InvalidGeometry', 'InvalidParameter',
    'GeometryError', 'RefinementError', 'NonFinite', 'DomainError', 'OutOfDomain', 'OrderUnreachable',
    'NotOnInterface', 'NoNontrivialSolution', 'AmbiguousStencil', 'RankDeficient', 'SingularGram',
    'InsufficientStencil', 'DegenerateTangent', 'MissingStencil', 'SingularMatrix', 'MeshMismatch', 'TopologyError',
    'HelmholtzWarning', 'AccuracyLoss', 'ResidualTooLarge', 'TruncationCapReached'
)


class HelmholtzError(Exception):
    """Base class of all errors raised by ``helmholtz_fd``."""


class ConfigurationError(HelmholtzError, ValueError):
    """The experiment description is inconsistent or unsupported."""


class NumericalError(HelmholtzError, ArithmeticError):
    """A numerical stage could not produce a trustworthy result."""


class InvalidGeometry(ConfigurationError):
    """PML radii or scatterer dimensions are inconsistent."""


class InvalidParameter(ConfigurationError):
    """A parameter lies outside its admissible range."""


class GeometryError(ConfigurationError):
    """The scatterer description cannot be used on the requested mesh."""


class RefinementError(ConfigurationError):
    """The refined mesh violates the nesting rules of the stencil table."""


class NonFinite(NumericalError):
    """A special function received a NaN or infinite argument."""


class DomainError(NumericalError):
    """A special function was evaluated at a singular point."""


class OutOfDomain(NumericalError):
    """A coordinate transform was evaluated outside its domain."""


class OrderUnreachable(NumericalError):
    """The requested consistency order is not available for this stencil."""


class NotOnInterface(NumericalError):
    """An interface fold was requested for a node that is not on Γ."""


class NoNontrivialSolution(NumericalError):
    """The order conditions only admit the zero stencil."""


class AmbiguousStencil(NoNontrivialSolution):
    """The leading order conditions leave more than one stencil up to scaling."""


class RankDeficient(NumericalError):
    """The order conditions are degenerate and cannot be normalized."""


class SingularGram(NumericalError):
    """The regularized Gram system could not be solved."""


class InsufficientStencil(NumericalError):
    """A boundary stencil has too few points."""


class DegenerateTangent(NumericalError):
    """The boundary parametrization has a vanishing tangent."""


class MissingStencil(NumericalError):
    """A mesh node has no stencil attached."""


class SingularMatrix(NumericalError):
    """The global sparse system is singular."""


class MeshMismatch(NumericalError):
    """Two meshes share no comparable nodes."""


class TopologyError(HelmholtzError, IndexError):
    """A stencil references a node that is not part of the mesh."""


class HelmholtzWarning(RuntimeWarning):
    """Base class of the warnings emitted by ``helmholtz_fd``."""


class AccuracyLoss(HelmholtzWarning):
    """A special function lost significant digits."""


class ResidualTooLarge(HelmholtzWarning):
    """The residual of the direct solve exceeds its tolerance."""


class TruncationCapReached(HelmholtzWarning):
    """The Fourier truncation of the Gram system hit its cap."""

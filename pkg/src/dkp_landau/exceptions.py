"""Exception types shared across the package."""


class DkpError(Exception):
    """Base class for all package errors."""


class GridTooCoarseError(DkpError):
    """Grid has too few nodes for the requested finite-difference stencil."""


class SingularNodeError(DkpError):
    """A grid node sits at r = 0, where the radial operators are singular."""


class BoundaryConditionError(DkpError):
    """Input profile violates the decay assumption of a quadrature inversion."""


class RegularityError(DkpError):
    """Weighted inversion integral diverges (input not regular enough)."""


class SingularMapError(DkpError):
    """The (F, G) <-> (phi0, phi2) map is singular (eps^2 == k^2)."""


class DegenerateCouplingError(DkpError):
    """Coupling matrix has coincident eigenvalues; no diagonalizing basis."""


class DegenerateDenominatorError(DkpError):
    """Polarizable quadratic degenerates (mass^4 == 4 B^2 sigma)."""


class KummerPoleError(DkpError):
    """Second Kummer parameter hit a non-positive integer (series pole)."""


class SeriesConvergenceError(DkpError):
    """Kummer series failed to converge within the iteration cap."""


class NormalizationError(DkpError):
    """Profile cannot be normalized (vanishing norm)."""


class ConfigError(DkpError):
    """Invalid run configuration."""

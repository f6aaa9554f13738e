"""Exception types shared across the package."""


class MlltError(Exception):
    """Base class for all mllt errors."""


class InvalidProbabilityError(MlltError):
    """A probability weight lies outside the open interval (0, 1)."""


class MassOverflowError(MlltError):
    """The probability weights sum to 1 or more, leaving no remainder mass."""


class ZeroTrialsError(MlltError):
    """The trial count is below 1."""


class OutOfSimplexError(MlltError):
    """A lattice point has a negative count or its counts exceed the trial budget."""


class EtaRangeError(MlltError):
    """The bulk-width parameter is outside (0, 1)."""


class TooLargeError(MlltError):
    """A lattice enumeration would exceed the size guard."""


class DegreeError(MlltError):
    """A monomial degree exceeds what the quadrature supports."""


class UnsupportedRegionError(MlltError):
    """A continuous region descriptor is not a box or half-space."""


class MomentIndexError(MlltError):
    """A moment specification refers to indices outside the model dimension."""


class CountsError(MlltError):
    """A full count vector is negative or does not sum to the trial count."""

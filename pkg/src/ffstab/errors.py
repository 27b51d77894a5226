"""Exception types shared across the package."""


class FfstabError(Exception):
    """Base class for all package-specific errors."""


class GaplessError(FfstabError):
    """A single-particle eigenvalue sits below the zero tolerance.

    Spectral flattening divides by the sign of each eigenvalue, so a
    (numerically) zero eigenvalue makes the construction ill-defined.
    """


class FitError(FfstabError):
    """Not enough usable data points for a meaningful decay fit."""


class IdentityViolation(FfstabError):
    """An identity that holds by construction failed numerically.

    This always signals an implementation bug (or catastrophically
    ill-conditioned input), never a legitimate runtime condition.
    """


class DegeneracyAmbiguous(FfstabError):
    """The requested ground-space dimension does not match a clean
    spectral gap, so the ground projector is not well defined."""


class GapTooSmall(FfstabError):
    """The spectral gap is too small for the requested filter width."""


class DimensionOverflow(FfstabError):
    """The dense Fock-space representation would exceed the size cap."""


class ParityError(FfstabError):
    """An operator has the wrong fermion parity for the requested map."""

"""Exception types raised across the package."""


class QJorgensenError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(QJorgensenError, ValueError):
    """Operands have incompatible shapes."""


class ZeroInverseError(QJorgensenError, ZeroDivisionError):
    """Inversion of a quaternion whose modulus is below tolerance."""


class EigenSolverError(QJorgensenError):
    """The right-eigenvalue extraction failed or produced inconsistent data."""


class NotInGroup(QJorgensenError):
    """A matrix failed the Sp(n,1) membership identities.

    Carries the worst residual so callers can report how badly it failed.
    """

    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"matrix is not in Sp(n,1); worst residual {residual:.3e}")


class NotInterior(QJorgensenError):
    """A projective point required to be interior is null or positive."""


class NotElliptic(QJorgensenError):
    """Element has no interior fixed point or non-unit eigenvalue moduli."""


class AmbiguousTypes(QJorgensenError):
    """Eigenvector Hermitian norms straddle zero within tolerance."""


class NormalizationFailed(QJorgensenError):
    """Could not build a group element moving the given point to the origin."""


class EmbeddingFailed(QJorgensenError):
    """Embedded matrix failed Sp(1,1) membership (input not in SL(2,C))."""


class OutsideDisk(QJorgensenError):
    """Parameter t fell outside the open unit disk."""


class ParseError(QJorgensenError, ValueError):
    """Malformed scalar expression; `position` locates the offending character."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)

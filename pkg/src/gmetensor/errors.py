"""Exception types raised across the package."""


class GMEError(ValueError):
    """Base class for all input/contract violations."""


class NotHermitian(GMEError):
    pass


class InvalidDimension(GMEError):
    pass


class CapExceeded(GMEError):
    pass


class NotNormalized(GMEError):
    pass


class InvalidBipartition(GMEError):
    pass


class OutOfRange(GMEError):
    pass


class EmptySubset(GMEError):
    pass


class InvalidParty(GMEError):
    pass


class BadSplit(GMEError):
    pass


class KOutOfRange(GMEError):
    pass


class BadParams(GMEError):
    pass


class WrongPartyCount(GMEError):
    pass


class NotPure(GMEError):
    pass


class UnsamplableClass(GMEError):
    pass


class DimensionMismatch(GMEError):
    pass


class InvalidState(GMEError):
    """Density matrix fails Hermiticity, trace or positivity checks."""

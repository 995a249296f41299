"""Exception types raised by the verification library."""


class QOUError(ValueError):
    """Base class for all library errors."""


class InvalidDimensionError(QOUError):
    pass


class DimensionMismatchError(QOUError):
    pass


class PrecisionModeError(QOUError):
    pass


class DomainError(QOUError):
    """An argument lies outside the domain where the quantity is defined."""


class InfeasibleParametersError(QOUError):
    pass


class TruncationTooSmallError(QOUError):
    """The requested object does not fit inside the truncated Fock space."""


class SpanInsufficientError(QOUError):
    """A matrix could not be expanded in the eigenbasis to the requested accuracy."""


class BracketError(QOUError):
    pass

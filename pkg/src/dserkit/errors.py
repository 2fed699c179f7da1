"""Exception hierarchy shared by all modules."""


class DserError(Exception):
    """Base class for every error raised by dserkit."""


class DescriptorMismatch(DserError):
    pass


class DimensionMismatch(DserError):
    pass


class NotAUnit(DserError, ArithmeticError):
    pass


class NonMonomialDenominator(NotAUnit):
    """The localized polynomial ring cannot invert a non-monomial element."""


class NotInvertible(DserError, ArithmeticError):
    pass


class OutOfBounds(DserError, IndexError):
    pass


class IndexOutOfRange(DserError, IndexError):
    pass


class InvalidRank(DserError, ValueError):
    pass


class UnsupportedVector(DserError, ValueError):
    pass


class ConstraintViolated(DserError, ValueError):
    pass


class NonComponentComposite(DserError):
    """A composite map is supported away from the single entry it must occupy."""


class ConfigError(DserError, ValueError):
    pass


class RankTooSmall(ConfigError):
    pass


class ParseError(DserError, ValueError):
    pass

"""Exception types raised across the package."""


class HeckeKLError(Exception):
    """Base class for every error raised by heckekl."""


class MalformedCartan(HeckeKLError, ValueError):
    pass


class IndexOutOfRange(HeckeKLError, IndexError):
    pass


class SystemMismatch(HeckeKLError, ValueError):
    pass


class ParabolicInfinite(HeckeKLError):
    """The parabolic subgroup W_J did not close within the element cap."""


class NotComparable(HeckeKLError, ValueError):
    pass


class NotMinCosetRep(HeckeKLError, ValueError):
    pass


class PostVerificationFailed(HeckeKLError, AssertionError):
    """A computed canonical basis element violates its defining conditions.

    This always indicates a bug, never a valid state.
    """


class NoSolution(HeckeKLError, ArithmeticError):
    pass


class UnknownSuite(HeckeKLError, KeyError):
    pass


class ConfigurationInvalid(HeckeKLError, ValueError):
    pass


class CacheHeaderMismatch(HeckeKLError):
    pass


class CorruptCache(HeckeKLError):
    pass

"""Exception hierarchy shared by the library and the command line."""


class ToricLociError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 4


class InputError(ToricLociError, ValueError):
    """Malformed or mathematically invalid input (bad shapes, non-posets, ...)."""

    exit_code = 2


class ResourceError(ToricLociError):
    """A configured enumeration cap or size limit was exceeded."""

    exit_code = 3


class InvariantError(ToricLociError, AssertionError):
    """An internal consistency check failed."""

    exit_code = 4

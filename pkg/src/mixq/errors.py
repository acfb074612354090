"""Exception hierarchy shared by the library and the command line."""


class MixqError(Exception):
    """Base class for all library errors."""


class ArgumentError(MixqError, ValueError):
    """An input violates an operation's preconditions."""


class DomainError(MixqError, ValueError):
    """Inputs are well formed but the requested computation has no answer."""


class ResourceError(MixqError):
    """The dense qubit cap would be exceeded."""


class UnsupportedError(MixqError):
    """A valid request that this library deliberately does not handle."""


class StateFileError(MixqError):
    """A state file is malformed or describes an invalid state."""

"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside its documented domain.

    The message names the violated constraint so callers (and the CLI)
    can report exactly which precondition failed.
    """


class UnsupportedBoundError(DomainError):
    """The requested bound family is not applicable to the given inputs."""

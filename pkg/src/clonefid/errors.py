"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class ResourceError(MemoryError):
    """A dense brute-force computation would exceed the configured size cap."""

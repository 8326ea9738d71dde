"""Errors raised by the enumeration library."""


class AtlasError(Exception):
    """Base class for every error raised by Excess Atlas."""


class SeriesDomainError(AtlasError, ValueError):
    """A series operation was applied outside of its domain."""


class SaddleDomainError(AtlasError, ValueError):
    """The saddle point is undefined or singular for the given input."""


class CapExceeded(AtlasError, ValueError):
    """A request exceeds one of the configured cost guards."""

    def __init__(self, cap, limit, value):
        self.cap = cap
        self.limit = limit
        self.value = value
        super().__init__(f'{cap} is {limit}, got {value}')


class IdentityViolation(AtlasError):
    """
    An identity that must hold exactly does not.

    `witness` is a dict holding the failing parameters and both sides.
    """

    def __init__(self, message, witness=None):
        self.witness = witness or {}
        super().__init__(message)

    def __str__(self):
        message = super().__str__()
        if not self.witness:
            return message
        details = ', '.join(
            f'{key}={value}' for key, value in sorted(self.witness.items())
        )
        return f'{message} ({details})'

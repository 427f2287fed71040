"""Exception hierarchy shared by all lienil modules."""


class LienilError(Exception):
    """Base class for all package errors."""


class InputError(LienilError):
    """Invalid user input: bad dimensions, bad primes, parse failures."""


class PresentationError(InputError):
    """A power-commutator presentation is inconsistent (collection does not
    define a group of the full order)."""


class ResourceLimitError(LienilError):
    """A configured size cap (group order, chain length) was exceeded."""


class InternalInvariantError(LienilError):
    """A mathematically guaranteed invariant failed; indicates a bug."""

"""Exception types shared across the package."""


class SubwordError(Exception):
    """Base class for all library errors."""


class ParseError(SubwordError, ValueError):
    """Malformed textual input (type descriptors, word literals, facet literals)."""


class UnsupportedTypeError(ParseError):
    """Requested Coxeter type is outside the crystallographic scope."""


class NotRepresentableError(SubwordError, ValueError):
    """The word does not contain a reduced expression of the target element."""


class CapExceededError(SubwordError, RuntimeError):
    """A configured size cap (facet count, group order) was exceeded."""


class IntegrityError(SubwordError, AssertionError):
    """A structural invariant that should always hold was violated; a bug trap."""

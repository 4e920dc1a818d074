"""Exception types shared across the package."""


class GroupEqError(Exception):
    """Base class for all groupeq errors."""


class ParseError(GroupEqError):
    """Malformed input text (group files, system files, algebra files)."""


class ValidationError(GroupEqError):
    """A structural invariant failed (group axioms, binding, action, ...)."""


class CapExceeded(GroupEqError):
    """A configured size or work cap would be exceeded."""

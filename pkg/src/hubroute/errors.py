"""Exception hierarchy.

Argument errors (bad ids, out-of-range parameters) are plain ``ValueError``.
"""


class HubrouteError(Exception):
    """Base class for package errors."""


class DataError(HubrouteError):
    """Input data cannot be used: unreadable file, empty or disconnected graph."""


class InvariantViolation(HubrouteError, RuntimeError):
    """An internal guarantee failed, e.g. a route exceeded the hop guard."""

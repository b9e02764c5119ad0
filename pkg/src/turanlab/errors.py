"""Exception types shared across the toolkit."""


class TuranLabError(Exception):
    pass


class PreconditionError(TuranLabError, ValueError):
    """An operation was called outside the regime where it is defined."""


class GraphFormatError(TuranLabError, ValueError):
    """Malformed graph6 or edge-list input."""

    def __init__(self, message, token=None):
        if token is not None:
            message = f"{message} (offending token: {token!r})"
        super().__init__(message)
        self.token = token


class GuardExceeded(TuranLabError, RuntimeError):
    """An exact search was refused because the instance is over its size guard."""

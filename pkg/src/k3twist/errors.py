"""Exception hierarchy shared by the library and the command line front end."""


class K3TwistError(Exception):
    """Base class for all errors raised by k3twist."""


class InputError(K3TwistError, ValueError):
    """Malformed or inconsistent input data."""


class DegenerateBasis(InputError):
    pass


class NotAnIsometry(InputError):
    """A matrix failed to preserve the Gram form.

    ``entry`` holds the first ``(i, j)`` position where ``M^T G M`` and ``G``
    disagree.
    """

    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


class InvalidPeriod(InputError):
    pass


class BudgetExceeded(K3TwistError):
    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class PreconditionError(K3TwistError):
    """An operation was called outside the domain where it is defined."""


class SearchExhausted(K3TwistError):
    """A bounded search found nothing. This is never a proof of absence."""

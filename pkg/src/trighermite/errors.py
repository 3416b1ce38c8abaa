"""Exception types raised by trighermite."""


class TrigHermiteError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(TrigHermiteError, ValueError):
    """An argument violates the documented precondition of an operation."""


class SingularSystemError(TrigHermiteError, ArithmeticError):
    """A per-harmonic linear system is numerically singular.

    Attributes
    ----------
    k : int
        The offending harmonic index.
    """

    def __init__(self, message, k):
        super().__init__(message)
        self.k = k

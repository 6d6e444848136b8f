"""Exception hierarchy shared by every module."""


class GInvError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(GInvError, ValueError):
    pass


class NotSquare(ShapeMismatch):
    pass


class OrderMismatch(GInvError, ValueError):
    pass


class OrderZero(OrderMismatch):
    pass


class ZeroMatrix(GInvError, ValueError):
    """Raised where a factorization of positive width is required."""


class NotGroupInvertible(GInvError):
    """The group inverse does not exist.

    ``depth`` is set by the n-order recursion to the order at which the
    existence condition failed; ``report`` carries an existence report when
    one was computed.
    """

    def __init__(self, message, *, depth=None, report=None):
        super().__init__(message)
        self.depth = depth
        self.report = report


class IndexNotOne(NotGroupInvertible):
    pass


class NotMPInvertible(GInvError):
    def __init__(self, message, *, report=None):
        super().__init__(message)
        self.report = report


class HypothesisFailed(GInvError):
    pass


class Inconsistent(GInvError):
    """The linear system has no solution."""


class InverseMissing(GInvError):
    def __init__(self, message, *, operand):
        super().__init__(message)
        self.operand = operand


class VerificationError(GInvError, RuntimeError):
    """A computed result failed its own post-hoc check."""


class FormulaInconsistent(VerificationError):
    pass


class OracleMismatch(VerificationError):
    pass


class ToleranceConflict(VerificationError):
    """Two equivalent existence tests disagreed."""

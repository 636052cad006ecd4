"""Exception types shared across the package and mapped to CLI exit codes."""


class IntresError(Exception):
    exit_code = 1


class InputError(IntresError, ValueError):
    exit_code = 2


class DepthExceeded(IntresError):
    """A resolution kernel is still nonzero after the allowed number of steps."""

    exit_code = 3


class JoinMissing(IntresError):
    """A join needed for a Moebius inversion does not exist among the intervals."""

    exit_code = 4


class InvariantViolation(IntresError):
    """An internal consistency check failed."""

    exit_code = 5


# raised when the two sides of the intgldim computation disagree
InternalInconsistency = InvariantViolation

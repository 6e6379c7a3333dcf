"""Exception hierarchy shared by all modules.

Every error carries the process exit code the command-line driver maps it to.
"""


class FloydHullError(Exception):
    exit_code = 1


class ConfigError(FloydHullError):
    exit_code = 2


class CapExceeded(FloydHullError):
    """A search or enumeration hit its configured cap.

    ``partial`` holds whatever was computed before the cap (a lower bound).
    """

    exit_code = 3

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BallTooLarge(CapExceeded):
    pass


class LengthBudgetExceeded(CapExceeded):
    pass


class InvariantViolation(FloydHullError):
    """A structural invariant failed. Always a bug."""

    exit_code = 4


class DisconnectedResult(InvariantViolation):
    pass


class UnknownGenerator(FloydHullError):
    exit_code = 5


class MissingImage(FloydHullError):
    exit_code = 6


class BoundTooSmall(FloydHullError):
    exit_code = 7


class Disconnected(FloydHullError):
    exit_code = 8


class NotGeodesic(FloydHullError):
    exit_code = 9


class UnsupportedSubgroup(FloydHullError):
    exit_code = 10


class EmptyShadow(FloydHullError):
    exit_code = 11


class NoWitnessFound(FloydHullError):
    exit_code = 12

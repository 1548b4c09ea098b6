"""Exception types shared across the package."""


class RedistrictError(Exception):
    """Base class for all domain errors raised by this package."""


class ValidationError(RedistrictError, ValueError):
    """An instance or allocation description violates a model constraint."""


class InvalidGroupCountError(ValidationError):
    """A student carries a group label outside {1, 2}."""


class InaccessibleInitialError(ValidationError):
    """A student's initial school is not in their accessible set."""


class OverflowGuardError(ValidationError):
    """Inputs large enough that exact 64-bit arithmetic is not guaranteed."""


class SizeMismatchError(RedistrictError, ValueError):
    """An operation requiring equal group sizes was called with unequal groups."""


class PreconditionViolatedError(RedistrictError, ValueError):
    """A solver stage was called with inputs that break its entry conditions."""


class NoPathError(RedistrictError, RuntimeError):
    """The adjustment search found no deficient school reachable from an
    excess school.  Provably impossible for valid inputs; indicates a bug."""


class InternalError(RedistrictError, RuntimeError):
    """A flow problem that is provably feasible came back infeasible;
    indicates a bug rather than bad input."""


class TooLargeError(RedistrictError, ValueError):
    """A brute-force operation was asked to enumerate too large a space."""


class ParseError(RedistrictError, ValueError):
    """A file could not be parsed against the strict instance/allocation schema."""

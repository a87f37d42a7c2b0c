"""Exception hierarchy."""


class MVNerveError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(MVNerveError, ValueError):
    pass


class InvalidComplexError(MVNerveError, ValueError):
    """A complex (simplicial or algebraic) violates its defining invariants."""


class NotACocycleError(MVNerveError, ValueError):
    pass


class PreconditionError(MVNerveError, ValueError):
    """Caller-supplied data fails a documented precondition."""


class SafetyCapExceeded(MVNerveError, RuntimeError):
    """Subdivision did not reach the required fineness within the level cap."""

"""Exception types shared across the toolkit."""


class EcquadError(Exception):
    """Base class for all toolkit errors."""


class UsageError(EcquadError, ValueError):
    """Operands from different fields/rings/curves, malformed input, etc."""


class DivisionByZero(EcquadError, ZeroDivisionError):
    pass


class CapabilityExceeded(EcquadError):
    """Input is beyond the desk-scale caps this implementation supports."""


class InconsistencyError(EcquadError):
    """An internal consistency check failed (e.g. a bad group order)."""


class ResourceError(EcquadError):
    """Degree or matrix caps were hit during a Groebner computation."""


class DimensionError(EcquadError):
    """The ideal is not zero-dimensional."""


class ContainmentSuspected(EcquadError):
    """Intersection multiplicity did not stabilise below the precision cap."""


class Degenerate(EcquadError):
    """A DLP instance has coordinate collisions or 2-torsion basis points."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class NoSolution(EcquadError):
    pass


class SolverTimeout(EcquadError, TimeoutError):
    pass

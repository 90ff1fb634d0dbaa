"""Exception hierarchy shared by every module of the package."""


class TaftDepthError(Exception):
    """Base class for all errors raised by taft_depth."""


class InvalidOrderError(TaftDepthError, ValueError):
    """The root-of-unity order n is outside the supported range."""


class IncompatibleOrderError(TaftDepthError, ValueError):
    """Two operands live over different cyclotomic fields."""


class ZeroDivisorError(TaftDepthError, ZeroDivisionError):
    """Division by the zero element of a field."""


class DomainError(TaftDepthError, ValueError):
    """An argument lies outside the domain of an operation."""


class ShapeError(TaftDepthError, ValueError):
    """Matrix or vector dimensions do not match."""


class InvariantViolation(TaftDepthError):
    """A structural invariant (module relations, ranks, bijections) failed."""


class InternalConsistencyError(TaftDepthError):
    """An internal cross-check failed; signals a bug rather than bad input."""


class TheoremViolation(TaftDepthError):
    """A computed value contradicts the result the pipeline certifies."""


class IngestError(TaftDepthError, ValueError):
    """A serialized artifact (module file, scalar text) could not be loaded."""

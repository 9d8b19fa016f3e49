"""Exception types shared across the package."""


class ElastinetError(Exception):
    """Base class for all package errors."""


class InvalidCurveError(ElastinetError):
    """Curve data violates discrete regularity (too few points, repeated points, ...)."""


class InvalidInputError(ElastinetError):
    """An operation received an object of the wrong kind or shape."""


class InvalidConfigError(ElastinetError):
    """A configuration value is out of its admissible range."""


class ContractViolationError(ElastinetError):
    """A documented precondition (e.g. unit-norm input) was violated."""


class SingularAngleError(ElastinetError):
    """Closed-form bubble energy evaluated at a singular angle (sin alpha = 0)."""


class NoOptimalRescaleError(ElastinetError):
    """Optimal rescaling is undefined for a straight network (zero bending energy)."""


class HypothesisNotMetError(ElastinetError):
    """A bound was queried with a hypothesis the input does not satisfy.

    This signals a misused check, not a failed inequality.
    """


class ConstructionFailedError(ElastinetError):
    """A geometric construction (e.g. the recovery sequence) could not be carried out."""


class ParseError(ElastinetError):
    """Malformed network document.  ``path`` locates the offending JSON node."""

    def __init__(self, message: str, path: str = "/"):
        super().__init__(f"{path}: {message}")
        self.path = path


class NetworkValidationError(ElastinetError):
    """A structurally well-formed network violates its kind's invariants."""


class OptimizationError(ElastinetError):
    """Optimization aborted (NaN energy or similar unrecoverable state)."""

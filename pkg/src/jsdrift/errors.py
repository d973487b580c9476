"""Exception types raised across the package."""


class JsdriftError(Exception):
    """Base class for all jsdrift errors."""


class InvalidInputError(JsdriftError, ValueError):
    """Input violates a precondition (empty, non-finite, out of range)."""


class GridMismatchError(JsdriftError, ValueError):
    """Two densities do not share an identical grid."""


class NoFeaturesAvailableError(JsdriftError, ValueError):
    """An aggregate score was requested over zero feature scores."""


class PatientNotFoundError(JsdriftError, KeyError):
    """The requested patient has no rows in the observation table."""


class ImputationImpossibleError(JsdriftError, ValueError):
    """A cohort has no observed values for a feature it must impute."""


class OutOfOrderError(JsdriftError, ValueError):
    """Hours were pushed to a scorer out of sequence."""


class UnknownFeatureError(JsdriftError, KeyError):
    """A feature id is not part of the registry or reference model."""


class ParseError(JsdriftError, ValueError):
    """A document could not be parsed; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class IncompatibleModelError(JsdriftError, ValueError):
    """A persisted model has an unsupported schema version."""

"""Exception hierarchy shared by all endscope modules."""


class EndscopeError(Exception):
    """Base class for every error raised by endscope."""


class ConfigError(EndscopeError, ValueError):
    """Invalid parameters: zero budgets, unknown graph tags, bad measures."""


class NotExploredError(EndscopeError, LookupError):
    """A vertex was requested that the current window has not reached."""


class DepthError(EndscopeError):
    """The requested evidence needs a deeper exploration than was given.

    ``required`` carries a depth hint when one can be computed.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class InvalidRayError(EndscopeError):
    """A ray generator produced a repeated vertex or a non-adjacent step."""


class NotMetricRayError(EndscopeError):
    """Metric-end comparison was requested for a ray without escape evidence."""


class OracleConflict(EndscopeError):
    """An oracle verdict contradicts a window-certified fact."""


class ClassificationError(EndscopeError):
    """Conflicting evidence while classifying a sequence.

    ``diagnostics`` is a plain dict describing what was observed.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class QISpecViolation(EndscopeError):
    """The quasi-isometry data breaks one of its own stated bounds."""

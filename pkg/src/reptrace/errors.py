"""Exception hierarchy shared by all reptrace modules."""


class ReptraceError(Exception):
    """Base class for all errors raised by this package."""


class OutOfRangeError(ReptraceError, ValueError):
    """A raw rating value lies outside its declared native range."""


class NoEvidenceError(ReptraceError):
    """A combination was requested but no component carries usable evidence."""


class NoTermsError(ReptraceError):
    """An overall trust score was requested over an empty term set."""


class WeightSumZeroError(ReptraceError):
    """All term weights are zero, so the weighted mean is undefined."""


class BadBinError(ReptraceError, ValueError):
    """An opinion bin index is outside 1..bins."""


class NonBinaryRatingError(ReptraceError, ValueError):
    """A binary-evidence operation received a rating value outside {0, 1}."""


class NumericalFailureError(ReptraceError):
    """A numeric routine produced a non-finite or out-of-bounds result."""


class DegenerateMomentsError(ReptraceError):
    """Moment matching produced non-positive beta parameters."""


class NotDominantError(ReptraceError):
    """The dominance argument was requested for a non-dominating pair."""


class InfeasibleTradeoffError(ReptraceError):
    """No subset pair satisfies the trade-off condition (invalid context)."""


class MissingDiagnosticsError(ReptraceError):
    """A model-specific argument needs diagnostics absent from the context."""


class NotPreferredError(ReptraceError):
    """The allegedly preferred provider does not strictly outrank the other."""

    def __init__(self, message: str, preferred_overall=None, other_overall=None):
        super().__init__(message)
        self.preferred_overall = preferred_overall
        self.other_overall = other_overall


class AmbiguousOrderError(NotPreferredError):
    """The two overall scores are equal within tolerance."""


class UnknownAgentError(ReptraceError, KeyError):
    """Rendering referenced an agent id with no display name."""


class ConfigError(ReptraceError):
    """A scenario or stores document is malformed."""

"""Exceptions shared across the package."""


class SignboundError(Exception):
    """Base class for all package-specific errors."""


class OptimizerDidNotConverge(SignboundError):
    """Line search exhausted its iteration budget before reaching tolerance."""


class EmptySubset(SignboundError, ValueError):
    """A proportion was requested over an empty index set."""


class InvalidFaithfulness(SignboundError, ValueError):
    """Faithfulness level q must lie in [1/2, 1]."""


class DegenerateAverage(SignboundError, ValueError):
    """A replicate average is exactly zero and no tie-break is configured."""


class MissingScores(SignboundError, ValueError):
    """Confidence scores are required but absent from the study."""


class DegenerateScores(SignboundError, ValueError):
    """All confidence scores are equal, so no thresholds can be formed."""


class InsufficientReplicates(SignboundError, ValueError):
    """At least two replicates are needed to pool a variance estimate."""


class SchemaError(SignboundError, ValueError):
    """A data file violates the expected tabular schema."""

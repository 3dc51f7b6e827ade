"""Exception taxonomy shared by all labelot modules."""


class LabelotError(Exception):
    """Base class for all errors raised by labelot."""


class InputError(LabelotError):
    """Invalid caller-supplied data: shape mismatches, bad ranges, malformed files."""


class SolverError(LabelotError):
    """Non-finite values reached the transport solver."""


class HardeningError(LabelotError):
    """A soft plan could not be turned into a hard labeling."""


class ProviderError(LabelotError):
    """An embedding/score provider failed or returned inconsistent data."""


class ConfigError(LabelotError):
    """A configuration value is missing or inconsistent."""


class EvaluationError(LabelotError):
    """Metrics were requested on an input that cannot be scored."""

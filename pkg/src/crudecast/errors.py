"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError means the user gave us a
bad config or bad flags (exit 2), everything else derived from
CrudecastError is a runtime/data/training failure (exit 1).
"""


class CrudecastError(Exception):
    """Base class for anticipated failures."""


class DataError(CrudecastError):
    """Bad or degenerate input data: unreadable files, empty joins,
    zero denominators, constant normalization ranges."""


class ConfigError(CrudecastError):
    """Invalid experiment configuration or override."""


class TrainingError(CrudecastError):
    """Training could not proceed (non-finite loss, failed trial)."""

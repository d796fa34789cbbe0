"""Exception hierarchy.

Every error carries the process exit code the command line maps it to, so
library callers and the CLI agree on one classification.
"""


class GazeBenchError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class RangeError(GazeBenchError, ValueError):
    """A coordinate or parameter lies outside its permitted range."""

    exit_code = 5


class PreconditionError(GazeBenchError, ValueError):
    """An operation was called with inputs violating its preconditions."""

    exit_code = 5


class SchemaError(GazeBenchError, ValueError):
    """Input data does not match the expected columns or JSON layout."""

    exit_code = 4


class EmptyInputError(GazeBenchError, ValueError):
    """Input contained no usable rows."""

    exit_code = 6


class EmptyScanpathError(GazeBenchError, ValueError):
    """Fixation detection found no window satisfying the thresholds."""

    exit_code = 6


class DegenerateMapError(GazeBenchError, ValueError):
    """A sampling distribution has no positive mass."""

    exit_code = 7


class SuppressionSaturationError(DegenerateMapError):
    """Inhibition of return zeroed the whole map at some step."""


class InputFileError(GazeBenchError, OSError):
    """A file could not be read or decoded."""

    exit_code = 3

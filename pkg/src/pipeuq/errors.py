"""Exception types shared across the package."""


class PipeUQError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidParameterError(PipeUQError, ValueError):
    """A parameter is outside its documented range or otherwise unusable."""


class DegenerateDomainError(PipeUQError, ValueError):
    """A metric is undefined for this domain (e.g. a false-alert rate when
    the domain contains no negatives)."""


class EvidenceFormatError(PipeUQError, ValueError):
    """An evidence CSV could not be parsed.

    ``line`` carries the 1-based line number of the offending row.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyEvidenceError(PipeUQError, ValueError):
    """An operation that needs at least one sample received none."""


class ConfigError(PipeUQError, ValueError):
    """A run configuration failed validation. The message names the fields."""

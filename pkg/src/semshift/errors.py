"""Exception hierarchy shared across the package."""


class SemshiftError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(SemshiftError):
    """A file is missing, truncated, or not in the expected format."""


class ValidationError(SemshiftError):
    """Data was parsed but violates an invariant (dimensions, counts, zeros)."""


class DomainError(SemshiftError):
    """An operation was called on input outside its mathematical domain."""


class ConfigError(SemshiftError):
    """An invalid combination of run options was requested."""

"""Exception types and the process exit codes the CLI maps them to."""

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4


class FuzzylocError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(FuzzylocError):
    """An operation was called with arguments that violate its contract."""


class ConfigError(FuzzylocError):
    """Unusable experiment configuration or CLI invocation."""


class SchemaError(ConfigError):
    """Input table does not provide the requested columns or label format."""


class DataError(FuzzylocError):
    """Data content cannot be used (unparseable cells, empty file, ...)."""


class InsufficientDataError(DataError):
    """Too few instances for the requested computation."""


class ZeroFiringError(FuzzylocError):
    """No rule fired for the given observation."""


class RuleBaseFormatError(DataError):
    """Rule-base document is malformed or violates a structural invariant."""


class RuleBaseVersionError(DataError):
    """Rule-base document was written with an unsupported format version."""

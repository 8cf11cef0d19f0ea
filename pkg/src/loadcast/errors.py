"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
InvariantError -> 4.
"""


class LoadcastError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(LoadcastError):
    """Invalid configuration value or combination."""


class DataError(LoadcastError):
    """Malformed, inconsistent, or insufficient input data."""


class SchemaError(DataError):
    """Feature schema of the input does not match the fitted artifact."""


class InvariantError(LoadcastError):
    """An internal consistency check failed; indicates a bug."""

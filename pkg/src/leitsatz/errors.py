"""Exception hierarchy shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
TransportError -> 4.
"""


class ConfigError(Exception):
    """Invalid or incomplete run configuration."""


class DataError(Exception):
    """Malformed or contract-violating input data."""


class TransportError(Exception):
    """An external service (tokenizer, generator, embedder) failed."""

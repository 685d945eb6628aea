"""Tools for producing and evaluating guiding-principle summaries of German
court judgments: corpus handling, extractive and endpoint-backed candidate
generation, ROUGE/embedding scoring, and a blinded seven-class human review
workflow with agreement analytics."""

__version__ = "0.1.0"

from .errors import ConfigError, DataError, TransportError

__all__ = ["ConfigError", "DataError", "TransportError", "__version__"]

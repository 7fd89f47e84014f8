"""Base exception types."""
from __future__ import annotations


class NanomisError(Exception):
    """Base exception class for nanomis errors."""

    pass


class ConfigError(NanomisError):
    """Exception raised when a run configuration cannot be loaded."""

    pass

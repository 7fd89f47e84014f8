"""Quantum dot analysis exception types."""
from __future__ import annotations

from nanomis.exceptions import NanomisError


class FitError(NanomisError):
    """Exception raised when the confinement cannot be fitted."""

    pass


class BracketError(NanomisError):
    """Exception raised when a bias bracket does not enclose a root."""

    pass

"""Warning types."""
from __future__ import annotations


class UnsourcedParameterWarning(Warning):
    """A parameter value is a placeholder without a device measurement."""

    pass

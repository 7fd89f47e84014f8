"""Device description exception types."""
from __future__ import annotations

from nanomis.exceptions import NanomisError


class MeshResourceError(NanomisError):
    """Exception raised when a mesh would exceed the node limit."""

    pass


class DeviceConfigError(NanomisError, ValueError):
    """Exception raised when a device configuration is invalid."""

    pass

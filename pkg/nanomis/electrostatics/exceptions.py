"""Electrostatics exception types."""
from __future__ import annotations

from nanomis.exceptions import NanomisError


class AssemblyError(NanomisError):
    """Exception raised when the discrete Poisson system is singular."""

    pass


class ChargeModelError(NanomisError):
    """Exception raised when carrier densities cannot be evaluated."""

    pass


class NotConvergedError(NanomisError):
    """Exception raised when a solve did not reach its tolerance."""

    pass

"""Closed-form cycle figures of merit."""
from __future__ import annotations

import math

from nanomis.cycle.protocol import PulseProtocol


def repetition_rate(protocol: PulseProtocol) -> float:
    """Cycle repetition rate (MHz)."""
    return 1e3 / protocol.period


def conversion_ratio(tau_rad: float, tau_nonrad: float = math.inf) -> float:
    """Fraction of recombinations that emit a photon.

    Example:
        ```python
        >>> conversion_ratio(1.0, 9.0)
        0.9
        ```
    """
    if tau_rad <= 0 or tau_nonrad <= 0:
        raise ValueError('Recombination times must be positive.')
    if math.isinf(tau_nonrad):
        return 1.0
    return tau_nonrad / (tau_nonrad + tau_rad)


def analytic_efficiency(protocol: PulseProtocol) -> float:
    """Photons per pulse for a protocol without early emission.

    The electron must tunnel in during the load phase and recombine
    during the reset phase, radiatively.

    Raises:
        ValueError: If early emission is enabled.
    """
    if protocol.early_emission_enabled:
        raise ValueError(
            'Closed-form efficiency does not cover early emission.',
        )
    loaded = -math.expm1(-protocol.t1 / protocol.tau_tunnel)
    recombined = -math.expm1(-protocol.t3 * protocol.recombination_rate)
    ratio = conversion_ratio(protocol.tau_rad, protocol.tau_nonrad)
    return loaded * recombined * ratio

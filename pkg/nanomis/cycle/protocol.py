"""Pulse protocol of the load, ramp and reset cycle."""
from __future__ import annotations

import dataclasses
import math
from typing import Any

DEFAULT_SEED = 20050101
"""Seed used when a run does not provide one."""


@dataclasses.dataclass(frozen=True)
class PulseProtocol:
    """Timing and rates of one emission cycle.

    The cycle loads an electron into the dot by tunnelling during `t1`,
    ramps the gate over `t2` to pull the dot level under the hole Fermi
    level, and lets the electron recombine during `t3`.

    Attributes:
        t1: Load phase duration (ns).
        t2: Ramp duration (ns).
        t3: Reset phase duration (ns).
        tau_tunnel: Electron tunnelling time into the dot (ns).
        tau_rad: Radiative recombination time (ns).
        tau_nonrad: Non-radiative recombination time (ns). Infinite by
            default.
        early_emission_enabled: Allow recombination during the load
            phase.
        early_emission_factor: Fraction of the radiative rate active
            during the load phase.

    Raises:
        ValueError: If a duration or time constant is not positive or the
            early emission factor is outside `[0, 1]`.
    """

    t1: float = 10.0
    t2: float = 0.1
    t3: float = 10.0
    tau_tunnel: float = 1.0
    tau_rad: float = 1.0
    tau_nonrad: float = math.inf
    early_emission_enabled: bool = False
    early_emission_factor: float = 0.0

    def __post_init__(self) -> None:
        for name in ('t1', 't2', 't3', 'tau_tunnel', 'tau_rad', 'tau_nonrad'):
            value = getattr(self, name)
            if math.isnan(value) or value <= 0:
                raise ValueError(f'{name} must be positive. Got {value}.')
        for name in ('t1', 't2', 't3', 'tau_tunnel', 'tau_rad'):
            if math.isinf(getattr(self, name)):
                raise ValueError(f'{name} must be finite.')
        if not 0 <= self.early_emission_factor <= 1:
            raise ValueError(
                'Early emission factor must be in [0, 1]. Got '
                f'{self.early_emission_factor}.',
            )

    @property
    def period(self) -> float:
        """Cycle period (ns)."""
        return self.t1 + self.t2 + self.t3

    @property
    def recombination_rate(self) -> float:
        """Total recombination rate (1/ns)."""
        return 1 / self.tau_rad + 1 / self.tau_nonrad

    @property
    def early_emission_rate(self) -> float:
        """Recombination rate active during the load phase (1/ns)."""
        if not self.early_emission_enabled:
            return 0.0
        return self.early_emission_factor / self.tau_rad

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> PulseProtocol:
        """Build a protocol from a configuration section.

        `tau_nonrad` may be `null` or `"inf"` for no non-radiative decay.

        Raises:
            ValueError: If keys are unknown or values invalid.
        """
        data = dict(data)
        if 'tau_nonrad' in data and data['tau_nonrad'] is None:
            data['tau_nonrad'] = math.inf
        try:
            values = {
                key: value if isinstance(value, bool) else float(value)
                for key, value in data.items()
            }
            return cls(**values)
        except TypeError as e:
            raise ValueError(
                f'Keys in protocol config do not match expected: {e!s}.',
            ) from None

"""Monte Carlo simulation of the pulsed emission cycle.

Each cycle draws four uniform variates whether or not they are used: the
tunnelling time, the early emission time, the recombination time and the
radiative branch. Runs with the same seed therefore share random numbers
cycle by cycle, and changing a protocol parameter moves each trajectory
continuously.

An electron that has not recombined by the end of the reset phase stays
in the dot for the next cycle. Trajectories start with an empty dot.
"""
from __future__ import annotations

import dataclasses
import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np

from nanomis.cycle.analytic import conversion_ratio
from nanomis.cycle.analytic import repetition_rate
from nanomis.cycle.protocol import DEFAULT_SEED
from nanomis.cycle.protocol import PulseProtocol
from nanomis.zeeman import apply_pi_pulse
from nanomis.zeeman import Polarization
from nanomis.zeeman import recombination_partner
from nanomis.zeeman import transition_polarization

logger = logging.getLogger(__name__)

UNIFORMS_PER_CYCLE = 4


class EmissionPhase(str, enum.Enum):
    """Phase of the cycle in which a photon was emitted."""

    LOAD = 'load'
    """Early emission while the electron is being loaded."""
    RAMP = 'ramp'
    """During the gate ramp. Not produced while the ramp is instantaneous."""
    RESET = 'reset'
    """Regular emission after the ramp."""


@dataclasses.dataclass(frozen=True)
class CycleOutcome:
    """Result of a single cycle.

    Attributes:
        electron_loaded: An electron tunnelled in during this cycle.
        photon_emitted: A photon was emitted.
        emission_time: Emission time from the start of the cycle (ns).
        emission_phase: Phase of the emission.
        electron_carried_over: The dot is still occupied at the end.
        nonradiative_loss: The electron recombined without a photon.
        polarization: Photon polarization.
    """

    electron_loaded: bool
    photon_emitted: bool
    emission_time: float | None = None
    emission_phase: EmissionPhase | None = None
    electron_carried_over: bool = False
    nonradiative_loss: bool = False
    polarization: Polarization | None = None

    @property
    def photon_count(self) -> int:
        """Photons emitted during the cycle."""
        return int(self.photon_emitted)


def simulate_cycle(
    protocol: PulseProtocol,
    occupied: bool,
    uniforms: np.ndarray,
    *,
    electron_sz: float = 0.5,
    pi_pulse: bool = False,
) -> CycleOutcome:
    """Simulate one cycle from four uniform variates in `[0, 1)`.

    Args:
        protocol: Pulse protocol.
        occupied: The dot holds an electron from the previous cycle.
        uniforms: Uniform variates for this cycle.
        electron_sz: Spin of a loaded electron.
        pi_pulse: Flip the electron spin before recombination.

    Returns:
        The cycle outcome.
    """
    u_tunnel, u_early, u_recombine, u_branch = uniforms[:UNIFORMS_PER_CYCLE]
    loaded = False
    if occupied:
        t_in = 0.0
    else:
        t_in = -protocol.tau_tunnel * math.log1p(-u_tunnel)
        if t_in <= protocol.t1:
            loaded = True
            occupied = True
    if not occupied:
        return CycleOutcome(electron_loaded=False, photon_emitted=False)

    spin = apply_pi_pulse(electron_sz) if pi_pulse else electron_sz
    polarization = transition_polarization(spin, recombination_partner(spin))

    early_rate = protocol.early_emission_rate
    if early_rate > 0:
        t_early = t_in - math.log1p(-u_early) / early_rate
        if t_early <= protocol.t1:
            return CycleOutcome(
                electron_loaded=loaded,
                photon_emitted=True,
                emission_time=t_early,
                emission_phase=EmissionPhase.LOAD,
                polarization=transition_polarization(
                    electron_sz,
                    recombination_partner(electron_sz),
                ),
            )

    t_recombine = -math.log1p(-u_recombine) / protocol.recombination_rate
    if t_recombine > protocol.t3:
        return CycleOutcome(
            electron_loaded=loaded,
            photon_emitted=False,
            electron_carried_over=True,
        )
    ratio = conversion_ratio(protocol.tau_rad, protocol.tau_nonrad)
    if u_branch >= ratio:
        return CycleOutcome(
            electron_loaded=loaded,
            photon_emitted=False,
            nonradiative_loss=True,
        )
    return CycleOutcome(
        electron_loaded=loaded,
        photon_emitted=True,
        emission_time=protocol.t1 + protocol.t2 + t_recombine,
        emission_phase=EmissionPhase.RESET,
        polarization=polarization,
    )


def simulate_trajectory(
    protocol: PulseProtocol,
    pulses: int,
    rng: np.random.Generator,
    *,
    electron_sz: float = 0.5,
    pi_pulse: bool = False,
) -> tuple[list[CycleOutcome], bool]:
    """Simulate consecutive cycles starting with an empty dot.

    Returns:
        Outcome of each cycle and whether the dot is occupied at the end.
    """
    uniforms = rng.random((pulses, UNIFORMS_PER_CYCLE))
    outcomes = []
    occupied = False
    for row in uniforms:
        outcome = simulate_cycle(
            protocol,
            occupied,
            row,
            electron_sz=electron_sz,
            pi_pulse=pi_pulse,
        )
        outcomes.append(outcome)
        occupied = outcome.electron_carried_over
    return outcomes, occupied


@dataclasses.dataclass
class CycleStats:
    """Aggregate statistics of a Monte Carlo run.

    Attributes:
        pulses: Number of cycles.
        photons: Photons emitted.
        efficiency: Photons per pulse.
        p0: Fraction of pulses without a photon.
        p1: Fraction of pulses with exactly one photon.
        p_multi: Fraction of pulses with more than one photon. A cycle
            holds at most one electron so this is zero.
        mean_emission_time: Mean emission time from the cycle start (ns).
        emission_time_std: Standard deviation of the emission time (ns).
        repetition_rate: Cycle repetition rate (MHz).
        rng_seed: Root seed of the run.
        trajectories: Independent trajectories the pulses were split into.
        loaded: Electrons loaded.
        nonradiative_losses: Electrons lost without a photon.
        carried_over: Cycles that ended with the dot occupied.
        final_occupancy: Trajectories ending with the dot occupied.
        early_emissions: Photons emitted during the load phase.
        polarization_counts: Photons per polarization.
    """

    pulses: int
    photons: int
    efficiency: float
    p0: float
    p1: float
    p_multi: float
    mean_emission_time: float
    emission_time_std: float
    repetition_rate: float
    rng_seed: int
    trajectories: int
    loaded: int
    nonradiative_losses: int
    carried_over: int
    final_occupancy: int
    early_emissions: int
    polarization_counts: dict[str, int]

    @property
    def conserved(self) -> bool:
        """Loaded electrons are all emitted, lost or still in the dot."""
        return self.loaded == (
            self.photons + self.nonradiative_losses + self.final_occupancy
        )

    def to_dict(self) -> dict[str, Any]:
        """Report form with units in the time and rate keys."""
        return {
            'pulses': self.pulses,
            'photons': self.photons,
            'efficiency': self.efficiency,
            'p0': self.p0,
            'p1': self.p1,
            'p_multi': self.p_multi,
            'mean_emission_time_ns': self.mean_emission_time,
            'emission_time_std_ns': self.emission_time_std,
            'repetition_rate_MHz': self.repetition_rate,
            'rng_seed': self.rng_seed,
            'trajectories': self.trajectories,
            'loaded': self.loaded,
            'nonradiative_losses': self.nonradiative_losses,
            'carried_over': self.carried_over,
            'final_occupancy': self.final_occupancy,
            'early_emissions': self.early_emissions,
            'polarization_counts': dict(self.polarization_counts),
        }


@dataclasses.dataclass
class MonteCarloResult:
    """Statistics of a run with its optional per-cycle events.

    Attributes:
        stats: Aggregate statistics.
        events: Cycle outcomes in pulse order, if recorded.
    """

    stats: CycleStats
    events: list[CycleOutcome] = dataclasses.field(default_factory=list)


def run_monte_carlo(
    protocol: PulseProtocol,
    pulses: int,
    seed: int = DEFAULT_SEED,
    *,
    trajectories: int = 1,
    workers: int = 1,
    electron_sz: float = 0.5,
    pi_pulse: bool = False,
    record_events: bool = False,
) -> MonteCarloResult:
    """Simulate many cycles of a protocol.

    The pulses are split into `trajectories` nearly equal runs. Trajectory
    `i` draws from a generator seeded by `SeedSequence([seed, i])` so the
    result only depends on the seed and the split, not on `workers`.

    Args:
        protocol: Pulse protocol.
        pulses: Total number of cycles.
        seed: Root seed.
        trajectories: Number of independent trajectories.
        workers: Threads used to simulate trajectories.
        electron_sz: Spin of loaded electrons.
        pi_pulse: Flip the electron spin before the reset phase.
        record_events: Keep every cycle outcome.

    Returns:
        Statistics and, if requested, the events.

    Raises:
        ValueError: If `pulses`, `trajectories` or `workers` is not
            positive or there are more trajectories than pulses.
    """
    if pulses < 1:
        raise ValueError(f'Pulses must be >= 1. Got {pulses}.')
    if trajectories < 1 or trajectories > pulses:
        raise ValueError(
            f'Trajectories must be in [1, {pulses}]. Got {trajectories}.',
        )
    if workers < 1:
        raise ValueError(f'Workers must be >= 1. Got {workers}.')

    sizes = [len(c) for c in np.array_split(np.arange(pulses), trajectories)]

    def _run(index: int) -> tuple[list[CycleOutcome], bool]:
        rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
        return simulate_trajectory(
            protocol,
            sizes[index],
            rng,
            electron_sz=electron_sz,
            pi_pulse=pi_pulse,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run, range(trajectories)))
    else:
        runs = [_run(index) for index in range(trajectories)]

    events = [outcome for outcomes, _ in runs for outcome in outcomes]
    final_occupancy = sum(occupied for _, occupied in runs)
    stats = _aggregate(protocol, events, seed, trajectories, final_occupancy)
    logger.debug(
        f'Simulated {pulses} pulse(s) in {trajectories} trajectory(ies): '
        f'{stats.photons} photon(s), efficiency {stats.efficiency:.5f}',
    )
    return MonteCarloResult(
        stats=stats,
        events=events if record_events else [],
    )


def _aggregate(
    protocol: PulseProtocol,
    events: list[CycleOutcome],
    seed: int,
    trajectories: int,
    final_occupancy: int,
) -> CycleStats:
    pulses = len(events)
    times = np.array(
        [e.emission_time for e in events if e.photon_emitted],
        dtype=np.float64,
    )
    photons = len(times)
    per_cycle = np.array([e.photon_count for e in events])
    p0 = float(np.mean(per_cycle == 0))
    p1 = float(np.mean(per_cycle == 1))
    counts = {
        Polarization.SIGMA_MINUS.value: 0,
        Polarization.SIGMA_PLUS.value: 0,
    }
    for event in events:
        if event.polarization is not None and event.photon_emitted:
            counts[event.polarization.value] = (
                counts.get(event.polarization.value, 0) + 1
            )
    return CycleStats(
        pulses=pulses,
        photons=photons,
        efficiency=photons / pulses,
        p0=p0,
        p1=p1,
        p_multi=float(np.mean(per_cycle > 1)),
        mean_emission_time=float(times.mean()) if photons > 0 else math.nan,
        emission_time_std=float(times.std()) if photons > 1 else math.nan,
        repetition_rate=repetition_rate(protocol),
        rng_seed=seed,
        trajectories=trajectories,
        loaded=sum(e.electron_loaded for e in events),
        nonradiative_losses=sum(e.nonradiative_loss for e in events),
        carried_over=sum(e.electron_carried_over for e in events),
        final_occupancy=final_occupancy,
        early_emissions=sum(
            e.emission_phase is EmissionPhase.LOAD for e in events
        ),
        polarization_counts=counts,
    )

"""Pulsed load-ramp-reset emission cycle of the single-photon source."""
from __future__ import annotations

from nanomis.cycle.analytic import analytic_efficiency
from nanomis.cycle.analytic import conversion_ratio
from nanomis.cycle.analytic import repetition_rate
from nanomis.cycle.montecarlo import run_monte_carlo
from nanomis.cycle.protocol import PulseProtocol

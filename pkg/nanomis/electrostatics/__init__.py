"""Self-consistent electrostatics of the gated quantum well."""
from __future__ import annotations

from nanomis.electrostatics.charge import charge_density
from nanomis.electrostatics.charge import ChargeState
from nanomis.electrostatics.solver import newton_solve
from nanomis.electrostatics.solver import PotentialField
from nanomis.electrostatics.solver import SolverOptions
from nanomis.electrostatics.sweep import bias_sweep

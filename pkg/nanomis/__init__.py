"""nanomis simulates a nanoscale MIS capacitor single-photon source.

The package models a gated InGaAs quantum well: it solves the nonlinear
electrostatics of the device, extracts the electrostatic quantum dot that
forms under the gate, and simulates the pulsed single-photon emission cycle
and the spin-selective optical transitions of the dot.
"""
from __future__ import annotations

import importlib.metadata as importlib_metadata

__version__ = importlib_metadata.version('nanomis')

"""Electrostatic quantum dot: confinement fit, spectrum and bias searches."""
from __future__ import annotations

from nanomis.qdot.fit import fit_parabola
from nanomis.qdot.profile import ConfinementProfile
from nanomis.qdot.profile import extract_profile
from nanomis.qdot.search import find_alignment_bias
from nanomis.qdot.search import find_onset_bias
from nanomis.qdot.search import lever_arm
from nanomis.qdot.spectrum import compute_spectrum
from nanomis.qdot.spectrum import DotSpectrum

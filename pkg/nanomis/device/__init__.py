"""Device description: materials, layer stack, gate and simulation mesh."""
from __future__ import annotations

from nanomis.device.materials import MaterialParams
from nanomis.device.mesh import Mesh
from nanomis.device.mesh import RefinementSpec
from nanomis.device.structure import DeviceSpec
from nanomis.device.structure import Layer
from nanomis.device.structure import LayerRole

"""Layer stack and gate geometry of the MIS capacitor."""
from __future__ import annotations

import dataclasses
import enum
import math

from nanomis.device.materials import DEFAULT_CONDUCTION_BAND_OFFSET
from nanomis.device.materials import DEFAULT_VALENCE_BAND_OFFSET
from nanomis.device.materials import hole_fermi_energy
from nanomis.device.materials import IN_GA_AS
from nanomis.device.materials import in_al_as
from nanomis.device.materials import IN_P
from nanomis.device.materials import MaterialParams


class LayerRole(str, enum.Enum):
    """Role of a layer in the heterostructure."""

    GATE_DIELECTRIC = 'gate_dielectric'
    """Barrier between the gate and the quantum well."""
    QUANTUM_WELL = 'quantum_well'
    """Doped well holding the two-dimensional hole gas."""
    BUFFER = 'buffer'
    """Barrier between the quantum well and the substrate."""
    SUBSTRATE = 'substrate'
    """Conductive substrate held at the reference potential."""


LAYER_ORDER = (
    LayerRole.GATE_DIELECTRIC,
    LayerRole.QUANTUM_WELL,
    LayerRole.BUFFER,
    LayerRole.SUBSTRATE,
)
"""Required top-to-bottom order of layer roles."""

TEMPERATURE_MODELS = ('zero_temperature',)


@dataclasses.dataclass(frozen=True)
class Layer:
    """A planar layer of the heterostructure.

    Attributes:
        material: Layer material.
        thickness: Layer thickness (nm).
        role: Layer role.
    """

    material: MaterialParams
    thickness: float
    role: LayerRole

    def __post_init__(self) -> None:
        object.__setattr__(self, 'role', LayerRole(self.role))
        if not math.isfinite(self.thickness) or self.thickness <= 0:
            raise ValueError(
                f'Thickness of the {self.role.value} layer must be '
                f'positive. Got {self.thickness}.',
            )


@dataclasses.dataclass(frozen=True)
class DeviceSpec:
    """Geometry, materials and doping of the capacitor.

    The axial coordinate `z` starts at the top of the substrate and points
    towards the gate. The gate is a metal cylinder standing on the gate
    dielectric and centred on the symmetry axis.

    Attributes:
        gate_height: Height of the metal gate (nm).
        gate_radius: Radius of the metal gate (nm).
        layers: Layers ordered from the top (gate side) down.
        acceptor_sheet_density: Ionized acceptor sheet density in the
            quantum well (cm^-2).
        mesa_radius: Radius of the cylindrical simulation domain (nm).
        gate_offset: Work-function offset of the gate (V). The electrode
            sits at the gate bias minus this offset.
        temperature_model: Carrier statistics model.

    Raises:
        ValueError: If the description is inconsistent. All problems
            found are listed in the message.
    """

    gate_height: float
    gate_radius: float
    layers: tuple[Layer, ...]
    acceptor_sheet_density: float
    mesa_radius: float
    gate_offset: float = 0.0
    temperature_model: str = 'zero_temperature'

    def __post_init__(self) -> None:
        object.__setattr__(self, 'layers', tuple(self.layers))
        problems = validate_device(self)
        if len(problems) > 0:
            raise ValueError(f'Invalid device: {"; ".join(problems)}.')

    def layer(self, role: LayerRole | str) -> Layer:
        """Get the layer with a role."""
        role = LayerRole(role)
        for layer in self.layers:
            if layer.role is role:
                return layer
        raise KeyError(role.value)

    @property
    def well(self) -> Layer:
        """The quantum well layer."""
        return self.layer(LayerRole.QUANTUM_WELL)

    def layer_bounds(self, role: LayerRole | str) -> tuple[float, float]:
        """Bottom and top `z` of a modelled layer (nm)."""
        role = LayerRole(role)
        top = self.gate_bottom
        for layer in self.layers:
            if layer.role is LayerRole.SUBSTRATE:
                break
            bottom = top - layer.thickness
            if layer.role is role:
                return (bottom, top)
            top = bottom
        raise KeyError(role.value)

    @property
    def gate_bottom(self) -> float:
        """Height of the dielectric surface the gate stands on (nm)."""
        return sum(
            layer.thickness
            for layer in self.layers
            if layer.role is not LayerRole.SUBSTRATE
        )

    @property
    def gate_top(self) -> float:
        """Height of the top of the gate and of the domain (nm)."""
        return self.gate_bottom + self.gate_height

    @property
    def hole_fermi_energy(self) -> float:
        """Hole Fermi energy of the undisturbed well (meV)."""
        return hole_fermi_energy(
            self.acceptor_sheet_density,
            self.well.material.heavy_hole_mass,
        )

    @property
    def band_reference(self) -> float:
        """Well conduction band edge above the Fermi level at zero field.

        Charge neutrality of the far-field well pins the valence band edge
        one hole Fermi energy above the Fermi level (eV).
        """
        return self.well.material.bandgap + self.hole_fermi_energy / 1000


def validate_device(spec: DeviceSpec) -> list[str]:
    """Collect consistency problems of a device description.

    Returns:
        Human readable descriptions of every problem found. Empty if the
        description is valid.
    """
    problems: list[str] = []
    roles = tuple(layer.role for layer in spec.layers)
    if roles != LAYER_ORDER:
        problems.append(
            'layer roles top to bottom must be '
            f'{[r.value for r in LAYER_ORDER]}, got '
            f'{[r.value for r in roles]}',
        )
    if not math.isfinite(spec.gate_height) or spec.gate_height <= 0:
        problems.append(f'gate height must be positive ({spec.gate_height})')
    if not math.isfinite(spec.gate_radius) or spec.gate_radius <= 0:
        problems.append(f'gate radius must be positive ({spec.gate_radius})')
    elif spec.mesa_radius <= spec.gate_radius:
        problems.append(
            f'mesa radius ({spec.mesa_radius}) must exceed the gate '
            f'radius ({spec.gate_radius})',
        )
    if (
        not math.isfinite(spec.acceptor_sheet_density)
        or spec.acceptor_sheet_density < 0
    ):
        problems.append(
            'acceptor sheet density must be non-negative '
            f'({spec.acceptor_sheet_density})',
        )
    if not math.isfinite(spec.gate_offset):
        problems.append(f'gate offset must be finite ({spec.gate_offset})')
    if spec.temperature_model not in TEMPERATURE_MODELS:
        problems.append(
            f'unknown temperature model {spec.temperature_model!r}',
        )
    return problems


def mesa_radius_for_square(side: float) -> float:
    """Radius of the disk with the same area as a square mesa (nm)."""
    if side <= 0:
        raise ValueError(f'Mesa side must be positive. Got {side}.')
    return side / math.sqrt(math.pi)


def build_default_device(
    conduction_band_offset: float = DEFAULT_CONDUCTION_BAND_OFFSET,
    valence_band_offset: float = DEFAULT_VALENCE_BAND_OFFSET,
) -> DeviceSpec:
    """Build the reference single-photon source device.

    A 70 nm diameter, 150 nm tall gate on 50 nm of InAlAs above a 10 nm
    InGaAs well doped to 1e11 cm^-2, a 300 nm InAlAs buffer and an InP
    substrate, in a 1 um square mesa.

    Args:
        conduction_band_offset: Barrier conduction band offset (eV).
        valence_band_offset: Barrier valence band offset (eV).
    """
    barrier = in_al_as(conduction_band_offset, valence_band_offset)
    return DeviceSpec(
        gate_height=150.0,
        gate_radius=35.0,
        layers=(
            Layer(barrier, 50.0, LayerRole.GATE_DIELECTRIC),
            Layer(IN_GA_AS, 10.0, LayerRole.QUANTUM_WELL),
            Layer(barrier, 300.0, LayerRole.BUFFER),
            Layer(IN_P, 1000.0, LayerRole.SUBSTRATE),
        ),
        acceptor_sheet_density=1e11,
        mesa_radius=mesa_radius_for_square(1000.0),
    )

"""Named reproductions of the benchmark examples and their tables."""

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from ..exceptions.errors import ValidationError
from ..fem.mesh import MeshSpec
from ..models.reports import ConvergenceMode
from ..models.schemes import SchemeSelector
from .exact import (
    ConvDiff2D,
    ConvDiff3D,
    Decay3D,
    ExactSolution,
    Harmonic1D,
    Transport2D,
    Transport3D,
)

PERTURBATION_AMPLITUDE = 0.3
PERTURBATION_SEED = 1

EXAMPLES: dict[str, ExactSolution] = {
    "example1": Harmonic1D(name="example1", p=3.0 * math.pi, lam=1.0, diffusion=0.01, b=10.0, t_end=0.1),
    "example1-pure": Harmonic1D(
        name="example1-pure", p=3.0 * math.pi, lam=1.0, diffusion=0.0, b=10.0, t_end=0.1
    ),
    "example2": Harmonic1D(name="example2", p=20.0 * math.pi, lam=1.0, diffusion=0.0, b=1.0, t_end=1.0),
    "example3": ConvDiff2D(name="example3", t_end=0.5),
    "example4": Transport2D(name="example4", t_end=0.5),
    "example5": ConvDiff3D(name="example5", t_end=0.5),
    "example6": Decay3D(name="example6", t_end=0.5),
    "example7": Transport3D(name="example7", t_end=0.1),
}


class PresetKind(str, Enum):
    CONVERGENCE = "convergence"
    FEM = "fem"


class Preset(BaseModel):
    """A table reproduction: example, columns, schemes and time."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="Preset name")
    kind: PresetKind = Field(..., description="1D convergence sweep or FEM run")
    example: str = Field(..., description="Key into EXAMPLES")
    schemes: tuple[str, ...] = Field(..., description="Scheme labels")
    ns: tuple[int, ...] = Field((), description="Node counts of a convergence sweep")
    meshes: tuple[str, ...] = Field((), description="Mesh recipes of a FEM run")
    mode: ConvergenceMode = Field(ConvergenceMode.SYMBOL_EXACT, description="Sweep mode")

    @property
    def solution(self) -> ExactSolution:
        return EXAMPLES[self.example]

    @property
    def t(self) -> float:
        return self.solution.t_end

    def selectors(self) -> list[SchemeSelector]:
        return [SchemeSelector.parse(label) for label in self.schemes]

    def mesh_specs(self) -> list[MeshSpec]:
        return [MeshSpec.parse(text) for text in self.meshes]


_SWEEP_SCHEMES = ("L", "1", "2", "3", "G")
_FEM_SCHEMES = ("1", "2", "3", "4", "G")
_PLANAR_MESHES = tuple(
    f"structured:{nx},{ny}" for nx, ny in ((15, 25), (19, 29), (25, 35), (29, 39), (35, 45), (39, 49))
)
_SPATIAL_MESHES = tuple(
    recipe
    for counts in ("11,13,15", "13,15,17")
    for recipe in (
        f"structured:{counts}",
        f"perturbed:{counts}:{PERTURBATION_AMPLITUDE:g}:{PERTURBATION_SEED}",
    )
)
_FINE_SWEEP = tuple(range(501, 1102, 100))

PRESETS: dict[str, Preset] = {
    preset.name: preset
    for preset in (
        Preset(
            name="table1",
            kind=PresetKind.CONVERGENCE,
            example="example1",
            schemes=_SWEEP_SCHEMES,
            ns=(259, 260, 265, 266, 483, 484, 485),
        ),
        Preset(
            name="table2",
            kind=PresetKind.CONVERGENCE,
            example="example1",
            schemes=_SWEEP_SCHEMES,
            ns=(501, 601, 701, 801, 901, 1001, 1101, 1201, 1501, 2501),
        ),
        Preset(
            name="table3",
            kind=PresetKind.CONVERGENCE,
            example="example1-pure",
            schemes=_SWEEP_SCHEMES,
            ns=_FINE_SWEEP,
        ),
        Preset(
            name="table4",
            kind=PresetKind.CONVERGENCE,
            example="example2",
            schemes=_SWEEP_SCHEMES,
            ns=_FINE_SWEEP,
        ),
        Preset(name="table5", kind=PresetKind.FEM, example="example3", schemes=_FEM_SCHEMES, meshes=_PLANAR_MESHES),
        Preset(name="table6", kind=PresetKind.FEM, example="example4", schemes=_FEM_SCHEMES, meshes=_PLANAR_MESHES),
        Preset(name="table7", kind=PresetKind.FEM, example="example5", schemes=_FEM_SCHEMES, meshes=_SPATIAL_MESHES),
        Preset(name="table8", kind=PresetKind.FEM, example="example6", schemes=_FEM_SCHEMES, meshes=_SPATIAL_MESHES),
        Preset(
            name="table9",
            kind=PresetKind.FEM,
            example="example7",
            schemes=("1", "2", "3", "G"),
            meshes=_SPATIAL_MESHES,
        ),
    )
}


def get_example(name: str) -> ExactSolution:
    """Look up an example by name.

    Raises:
        ValidationError: If the name is unknown.
    """
    try:
        return EXAMPLES[name]
    except KeyError:
        raise ValidationError(
            f"Unknown example {name!r}; choose from {', '.join(EXAMPLES)}"
        ) from None


def get_preset(name: str) -> Preset:
    """Look up a table preset by name.

    Raises:
        ValidationError: If the name is unknown.
    """
    try:
        return PRESETS[name]
    except KeyError:
        raise ValidationError(
            f"Unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None

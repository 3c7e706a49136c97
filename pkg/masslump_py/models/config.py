"""Command configuration records and the key=value config file reader."""

import math
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from ..exceptions.errors import ValidationError
from .reports import ConvergenceMode


class OutputFormat(str, Enum):
    """Table output format."""

    CSV = "csv"
    MARKDOWN = "markdown"


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class _CommandConfig(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")


class SymbolsConfig(_CommandConfig):
    """Parameters of the ``symbols`` command."""

    lam: float = Field(..., alias="lambda", description="Convection speed")
    kappa: float = Field(..., ge=0.0, description="Diffusion coefficient")
    h: float = Field(..., gt=0.0, description="Mesh size")
    p: float = Field(..., description="Wave number")
    n: int = Field(1, ge=0, le=64, description="Highest correction count to print")
    t: float | None = Field(None, ge=0.0, description="Time for the harmonic errors")

    @model_validator(mode="after")
    def _check_nontrivial(self) -> "SymbolsConfig":
        if self.kappa + abs(self.lam) <= 0.0:
            raise ValueError("kappa + |lambda| must be positive")
        return self


class CurvesConfig(_CommandConfig):
    """Parameters of the ``curves`` command.

    Exactly one of ``mu``, ``pure`` and ``fig4`` selects the mode.
    """

    mu: float | None = Field(None, description="Per-wave-number Peclet ratio")
    pure: bool = Field(False, description="Plot the pure-transport gap functions")
    fig4: bool = Field(False, description="Sweep z0 against mu instead")
    mu_range: tuple[float, float, int] | None = Field(
        None, description="Sweep range a:b:count for the z0 curve"
    )
    nmax: int = Field(4, ge=1, le=32, description="Highest correction count")
    zmax: float = Field(math.pi, gt=0.0, description="Right end of the z grid")
    samples: int = Field(400, ge=2, description="Number of z samples")
    svg: str | None = Field(None, description="Optional SVG polyline output")

    @field_validator("mu_range", mode="before")
    @classmethod
    def _parse_range(cls, value: Any) -> Any:
        if isinstance(value, str):
            parts = value.split(":")
            if len(parts) != 3:
                raise ValueError("mu range must look like a:b:count")
            return (float(parts[0]), float(parts[1]), int(parts[2]))
        return value

    @model_validator(mode="after")
    def _check_mode(self) -> "CurvesConfig":
        chosen = sum((self.mu is not None, self.pure, self.fig4))
        if chosen != 1:
            raise ValueError("choose exactly one of --mu, --pure and --fig4")
        if self.fig4:
            if self.mu_range is None:
                raise ValueError("--fig4 needs --mu-range a:b:count")
            lo, hi, count = self.mu_range
            if count < 2 or hi <= lo:
                raise ValueError("mu range needs b > a and count >= 2")
        return self


class RootsConfig(_CommandConfig):
    """Parameters of the ``roots`` command."""

    lam: float = Field(..., alias="lambda", description="Convection speed")
    kappa: float = Field(..., gt=0.0, description="Diffusion coefficient")
    p: float = Field(..., description="Wave number")
    length: float | None = Field(None, gt=0.0, description="Domain length for node thresholds")

    @field_validator("p")
    @classmethod
    def _nonzero(cls, value: float) -> float:
        if value == 0.0:
            raise ValueError("wave number must be nonzero")
        return value


class ConvergenceConfig(_CommandConfig):
    """Parameters of the ``convergence`` command."""

    example: str | None = Field(None, description="Example name")
    preset: str | None = Field(None, description="Table preset, table1 to table4")
    ns: list[int] = Field(default_factory=list, description="Node counts")
    schemes: list[str] = Field(default_factory=list, description="Scheme labels")
    mode: ConvergenceMode = Field(ConvergenceMode.SYMBOL_EXACT, description="Error evaluation")
    t: float | None = Field(None, ge=0.0, description="Evaluation time")
    tau: float | None = Field(None, gt=0.0, description="Upper bound on the RK4 step")
    jobs: int = Field(1, ge=1, description="Columns computed concurrently")

    @field_validator("ns", "schemes", mode="before")
    @classmethod
    def _split(cls, value: Any) -> Any:
        return _split_list(value)

    @field_validator("ns")
    @classmethod
    def _check_ns(cls, value: list[int]) -> list[int]:
        if any(n < 3 for n in value):
            raise ValueError("node counts must be >= 3")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("node counts must be strictly increasing")
        return value

    @model_validator(mode="after")
    def _check_source(self) -> "ConvergenceConfig":
        if (self.example is None) == (self.preset is None):
            raise ValueError("give exactly one of --example and --preset")
        if self.example is not None and not self.ns:
            raise ValueError("--example needs --ns")
        return self


class FemRunConfig(_CommandConfig):
    """Parameters of the ``femrun`` command."""

    example: str | None = Field(None, description="Example name, example3 to example7")
    preset: str | None = Field(None, description="Table preset, table5 to table9")
    mesh_file: str | None = Field(None, description="Mesh file to read")
    mesh: str | None = Field(None, description="Generated mesh recipe")
    corrections: list[int] = Field(default_factory=lambda: [1, 2, 3, 4], description="Correction counts")
    lumped: bool = Field(False, description="Also run the lumped scheme")
    consistent: bool = Field(True, description="Also run the consistent scheme")
    tau: float | None = Field(None, gt=0.0, description="Upper bound on the RK4 step")
    t_end: float | None = Field(None, ge=0.0, description="Final time")
    seed: int | None = Field(None, description="Overrides the seed of a perturbed recipe")
    jobs: int = Field(1, ge=1, description="Meshes computed concurrently")

    @field_validator("corrections", mode="before")
    @classmethod
    def _split(cls, value: Any) -> Any:
        return _split_list(value)

    @field_validator("corrections")
    @classmethod
    def _check_corrections(cls, value: list[int]) -> list[int]:
        if any(n < 1 for n in value):
            raise ValueError("correction counts must be >= 1")
        return value

    @model_validator(mode="after")
    def _check_source(self) -> "FemRunConfig":
        if self.preset is not None:
            if self.example is not None or self.mesh is not None or self.mesh_file is not None:
                raise ValueError("--preset cannot be combined with --example or a mesh")
            return self
        if self.example is None:
            raise ValueError("give --example or --preset")
        if (self.mesh is None) == (self.mesh_file is None):
            raise ValueError("give exactly one of --mesh and --mesh-file")
        return self


class PeConfig(_CommandConfig):
    """Parameters of the ``pe`` command."""

    p: float = Field(..., description="Wave number")
    pe: list[float] = Field(..., min_length=1, description="Peclet numbers")

    @field_validator("pe", mode="before")
    @classmethod
    def _split(cls, value: Any) -> Any:
        return _split_list(value)

    @field_validator("pe")
    @classmethod
    def _positive(cls, value: list[float]) -> list[float]:
        if any(not pe > 0.0 for pe in value):
            raise ValueError("Peclet numbers must be positive")
        return value

    @field_validator("p")
    @classmethod
    def _nonzero(cls, value: float) -> float:
        if value == 0.0:
            raise ValueError("wave number must be nonzero")
        return value


CommandConfig = SymbolsConfig | CurvesConfig | RootsConfig | ConvergenceConfig | FemRunConfig | PeConfig

COMMAND_CONFIGS: dict[str, type[_CommandConfig]] = {
    "symbols": SymbolsConfig,
    "curves": CurvesConfig,
    "roots": RootsConfig,
    "convergence": ConvergenceConfig,
    "femrun": FemRunConfig,
    "pe": PeConfig,
}


class RunConfig(BaseModel):
    """Settings of one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    command: str = Field(..., description="Subcommand name")
    out: str = Field("-", description="Output path, '-' for stdout")
    format: OutputFormat = Field(OutputFormat.CSV, description="Table output format")
    verbose: int = Field(0, ge=0, description="Verbosity level")
    params: CommandConfig = Field(..., description="Command-specific parameters")


_RUN_KEYS = ("out", "format", "verbose")


def normalize_key(key: str) -> str:
    """Map a long-flag spelling (``mesh-file``, ``--t-end``) to a field name."""
    return key.strip().lstrip("-").replace("-", "_")


def parse_config_text(text: str) -> dict[str, str]:
    """Parse a flat ``key=value`` file.

    Blank lines and lines starting with ``#`` are skipped.

    Raises:
        ValidationError: If a line has no ``=`` or an empty key.
    """
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValidationError(f"Invalid config file: line {number}: expected key=value")
        values[normalize_key(key)] = value.strip()
    return values


def load_config_file(path: str | Path) -> dict[str, str]:
    """Read a config file; ``OSError`` propagates to the caller."""
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def build_run_config(
    command: str, file_values: dict[str, Any], flag_values: dict[str, Any]
) -> RunConfig:
    """Merge file and flag values (flags win) and validate them.

    Raises:
        ValidationError: If the command is unknown or a value is invalid.
    """
    if command not in COMMAND_CONFIGS:
        raise ValidationError(f"Unknown command: {command!r}")
    merged = {normalize_key(k): v for k, v in file_values.items()}
    merged.update({normalize_key(k): v for k, v in flag_values.items() if v is not None})
    run_values = {key: merged.pop(key) for key in _RUN_KEYS if key in merged}
    try:
        params = COMMAND_CONFIGS[command].model_validate(merged)
        return RunConfig(command=command, params=params, **run_values)  # type: ignore[arg-type]
    except PydanticValidationError as e:
        raise ValidationError(f"Invalid {command} parameters: {e}") from e


__all__ = [
    "OutputFormat",
    "SymbolsConfig",
    "CurvesConfig",
    "RootsConfig",
    "ConvergenceConfig",
    "FemRunConfig",
    "PeConfig",
    "CommandConfig",
    "COMMAND_CONFIGS",
    "RunConfig",
    "normalize_key",
    "parse_config_text",
    "load_config_file",
    "build_run_config",
]

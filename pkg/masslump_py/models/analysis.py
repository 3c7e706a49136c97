"""Records and enumerations for the dispersion analysis."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class GapKind(str, Enum):
    """Gap function family.

    ``F``/``G`` compare a corrected scheme against the next correction or the
    consistent scheme when diffusion is present; the ``_TILDE`` kinds are the
    pure-transport counterparts and take no ``mu``.
    """

    F = "f"
    G = "g"
    F_TILDE = "f_tilde"
    G_TILDE = "g_tilde"

    @property
    def is_tilde(self) -> bool:
        return self in (GapKind.F_TILDE, GapKind.G_TILDE)

    @property
    def is_consistent(self) -> bool:
        return self in (GapKind.G, GapKind.G_TILDE)


class ThresholdKind(str, Enum):
    """Closed-form thresholds in z = p*h."""

    Z0 = "z0"
    Z_STAR = "z_star"
    PSI = "psi"


class GapPair(str, Enum):
    """Which squared symbol distance difference to evaluate."""

    N1_VS_N = "n1_vs_n"
    G_VS_N = "g_vs_n"
    G_DIST_N = "g_dist_n"


class RootReport(BaseModel):
    """A bracketed sign change located by scan and bisection."""

    model_config = ConfigDict(frozen=True)

    root: float = Field(..., description="Located root")
    bracket: tuple[float, float] = Field(..., description="Final bisection bracket")
    residual: float = Field(..., description="Function value at the root")
    sign_change: bool = Field(True, description="Whether the change is plus-to-minus")
    scan_bracket: tuple[float, float] | None = Field(
        None, description="Scan cell that first showed the sign change"
    )

    @property
    def width(self) -> float:
        """Width of the final bracket."""
        return self.bracket[1] - self.bracket[0]


class PeRow(BaseModel):
    """One row of the Peclet asymptotics table."""

    model_config = ConfigDict(frozen=True)

    pe: float = Field(..., description="Peclet number")
    z0: float = Field(..., description="Positivity threshold z0")
    z_tilde: float = Field(..., description="Smallest positive root of f_1")
    psi: float = Field(..., description="Upper bracket psi")
    z0_scaled: float = Field(..., description="z0 * Pe / |p|")
    gap_scaled: float = Field(..., description="(z_tilde - z0) * Pe^3 / |p|^3")
    psi_gap_scaled: float = Field(..., description="(psi - z0) * Pe^3 / |p|^3")

"""Scheme parameters and Fourier symbol values."""

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions.errors import DomainError


class SchemeParams(BaseModel):
    """Physical and discretization parameters of a 1D harmonic analysis.

    The convection speed is stored as ``lam`` and also accepted under the
    alias ``lambda``.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(..., alias="lambda", description="Convection speed")
    kappa: float = Field(..., ge=0.0, description="Diffusion coefficient")
    h: float = Field(..., gt=0.0, description="Mesh size")
    p: float = Field(..., description="Wave number of the harmonic")

    @model_validator(mode="after")
    def _check_nontrivial(self) -> "SchemeParams":
        if self.kappa + abs(self.lam) <= 0.0:
            raise ValueError("kappa + |lambda| must be positive")
        if not all(math.isfinite(v) for v in (self.lam, self.kappa, self.h, self.p)):
            raise ValueError("parameters must be finite")
        return self

    @property
    def z(self) -> float:
        """Dimensionless wave number p*h."""
        return self.p * self.h

    @property
    def mu(self) -> float:
        """Per-wave-number Peclet ratio lambda/(kappa*p)."""
        if self.kappa == 0.0 or self.p == 0.0:
            raise DomainError("mu is undefined when kappa = 0 or p = 0")
        return self.lam / (self.kappa * self.p)

    @property
    def pe(self) -> float:
        """Peclet number |lambda|/kappa."""
        if self.kappa == 0.0:
            raise DomainError("Peclet number is undefined when kappa = 0")
        return abs(self.lam) / self.kappa

    @property
    def is_pure_transport(self) -> bool:
        """Whether diffusion is absent."""
        return self.kappa == 0.0

    def with_h(self, h: float) -> "SchemeParams":
        """Return a copy with a different mesh size."""
        return SchemeParams(lam=self.lam, kappa=self.kappa, h=h, p=self.p)


class SymbolValue(BaseModel):
    """A complex Fourier symbol: growth rate plus phase frequency."""

    model_config = ConfigDict(frozen=True)

    re: float = Field(..., description="Real part (dissipation rate)")
    im: float = Field(..., description="Imaginary part (minus the phase frequency)")

    @classmethod
    def from_complex(cls, value: complex) -> "SymbolValue":
        """Build a symbol from a Python complex number."""
        return cls(re=value.real, im=value.imag)

    def to_complex(self) -> complex:
        """Return the symbol as a Python complex number."""
        return complex(self.re, self.im)

    @property
    def magnitude(self) -> float:
        """Modulus of the symbol."""
        return math.hypot(self.re, self.im)

    def __sub__(self, other: "SymbolValue") -> "SymbolValue":
        return SymbolValue(re=self.re - other.re, im=self.im - other.im)

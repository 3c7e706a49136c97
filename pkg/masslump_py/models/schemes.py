"""Semi-discrete scheme selection."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SchemeKind(str, Enum):
    """Family of semi-discrete scheme."""

    LUMPED = "lumped"
    CORRECTED = "corrected"
    CONSISTENT = "consistent"


class SchemeSelector(BaseModel):
    """Which mass treatment a semi-discrete scheme uses.

    ``corrected`` with ``n = 0`` is normalized to ``lumped``; ``n`` is always 0
    for the lumped and consistent kinds.
    """

    model_config = ConfigDict(frozen=True)

    kind: SchemeKind = Field(..., description="Scheme family")
    n: int = Field(0, ge=0, description="Number of Neumann corrections")

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: object) -> object:
        if isinstance(data, dict):
            kind = SchemeKind(data.get("kind"))
            n = int(data.get("n", 0) or 0)
            if kind is SchemeKind.CORRECTED and n == 0:
                kind = SchemeKind.LUMPED
            if kind is not SchemeKind.CORRECTED:
                n = 0
            return {"kind": kind, "n": n}
        return data

    @classmethod
    def lumped(cls) -> "SchemeSelector":
        return cls(kind=SchemeKind.LUMPED)

    @classmethod
    def corrected(cls, n: int) -> "SchemeSelector":
        return cls(kind=SchemeKind.CORRECTED, n=n)

    @classmethod
    def consistent(cls) -> "SchemeSelector":
        return cls(kind=SchemeKind.CONSISTENT)

    @classmethod
    def parse(cls, token: str) -> "SchemeSelector":
        """Parse a scheme label.

        Args:
            token: ``L``/``lumped``, ``G``/``consistent``, or a correction count.

        Returns:
            The matching selector.

        Raises:
            ValueError: If the token is not recognised.
        """
        text = token.strip()
        lowered = text.lower()
        if lowered in ("l", "lumped"):
            return cls.lumped()
        if lowered in ("g", "consistent", "galerkin"):
            return cls.consistent()
        if text.isdigit():
            return cls.corrected(int(text))
        raise ValueError(f"Unknown scheme label: {token!r}")

    @property
    def label(self) -> str:
        """Short label used in tables: ``L``, ``1``, ``2``, ..., ``G``."""
        if self.kind is SchemeKind.LUMPED:
            return "L"
        if self.kind is SchemeKind.CONSISTENT:
            return "G"
        return str(self.n)

    @property
    def corrections(self) -> int:
        """Number of Neumann terms beyond the lumped inverse."""
        return self.n

    def __str__(self) -> str:
        return self.label

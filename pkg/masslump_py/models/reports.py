"""Error and convergence report models."""

from enum import Enum

from pydantic import BaseModel, Field


class ConvergenceMode(str, Enum):
    """How scheme errors are obtained in a 1D convergence study."""

    SYMBOL_EXACT = "symbol"
    TIME_STEPPED = "time-stepped"


class ErrorReport(BaseModel):
    """Error norms of one numerical solution against the exact one."""

    scheme: str = Field("", description="Scheme label (L, 1, 2, ..., G)")
    inf_abs: float = Field(..., ge=0.0, description="Maximum absolute error")
    inf_rel: float = Field(..., ge=0.0, description="Maximum relative error")
    l2_rel: float = Field(..., ge=0.0, description="Relative discrete Euclidean error")
    excluded_nodes: int = Field(
        0, ge=0, description="Nodes left out of inf_rel because |u_exact| is tiny"
    )


class PairGap(BaseModel):
    """Difference of squared errors between two schemes on one mesh."""

    first: str = Field(..., description="Label of the first scheme")
    second: str = Field(..., description="Label of the second scheme")
    gap: float = Field(..., description="||err_first||^2 - ||err_second||^2 (absolute)")
    rel_difference: float = Field(
        ..., description="||err_first||_rel - ||err_second||_rel"
    )
    order: float | None = Field(
        None, description="Empirical order against the previous column"
    )

    @property
    def key(self) -> str:
        """Pair label such as ``2,1``."""
        return f"{self.first},{self.second}"


class ConvergenceRow(BaseModel):
    """All measurements for one mesh in a 1D convergence study."""

    n_nodes: int = Field(..., ge=3, description="Total number of mesh nodes N")
    h: float = Field(..., gt=0.0, description="Mesh size")
    errors: dict[str, ErrorReport] = Field(..., description="Error report per scheme")
    pairs: list[PairGap] = Field(default_factory=list, description="Scheme pair gaps")

    def pair(self, key: str) -> PairGap:
        """Look up a pair by its ``k,j`` label."""
        for entry in self.pairs:
            if entry.key == key:
                return entry
        raise KeyError(key)


class ConvergenceTable(BaseModel):
    """A grid convergence study: one row per mesh, h strictly decreasing."""

    example: str = Field(..., description="Name of the example")
    mode: ConvergenceMode = Field(..., description="How errors were obtained")
    t: float = Field(..., description="Evaluation time")
    schemes: list[str] = Field(..., description="Scheme labels in display order")
    pair_keys: list[str] = Field(..., description="Pair labels in display order")
    rows: list[ConvergenceRow] = Field(default_factory=list, description="Table columns")

    @property
    def n_values(self) -> list[int]:
        return [row.n_nodes for row in self.rows]

    def rel_errors(self, scheme: str) -> list[float]:
        """Relative max-norm errors of one scheme across the table."""
        return [row.errors[scheme].inf_rel for row in self.rows]

    def orders(self, key: str) -> list[float | None]:
        """Empirical orders of one pair; the first entry is always None."""
        return [row.pair(key).order for row in self.rows]

    def difference_rows(self) -> dict[str, list[float]]:
        """Differences of relative max-norm errors per pair, column by column."""
        return {
            key: [row.pair(key).rel_difference for row in self.rows]
            for key in self.pair_keys
        }

"""Mesh construction and the line-oriented mesh text format."""

import logging
import math
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions.errors import (
    DegenerateElementError,
    DomainError,
    InvalidMeshError,
    MeshParseError,
    ValidationError,
)

logger = logging.getLogger(__name__)

PERTURBATION_RETRIES = 10

Bounds = tuple[tuple[float, float], ...]


class Mesh1DPeriodic(BaseModel):
    """Uniform periodic mesh of ``[a, b)``.

    ``n_nodes`` counts both ends, so ``h = (b - a)/(n_nodes - 1)`` and the last
    node is identified with the first; ``n_nodes - 1`` unknowns remain.
    """

    model_config = ConfigDict(frozen=True)

    a: float = Field(..., description="Left end of the domain")
    b: float = Field(..., description="Right end of the domain")
    n_nodes: int = Field(..., ge=3, description="Number of nodes including both ends")

    @model_validator(mode="after")
    def _check_interval(self) -> "Mesh1DPeriodic":
        if not self.b > self.a:
            raise ValueError("b must be greater than a")
        return self

    @property
    def dim(self) -> int:
        return 1

    @property
    def h(self) -> float:
        """Mesh size."""
        return (self.b - self.a) / (self.n_nodes - 1)

    @property
    def n_unknowns(self) -> int:
        """Number of distinct periodic nodes."""
        return self.n_nodes - 1

    @property
    def length(self) -> float:
        return self.b - self.a

    def coordinates(self) -> NDArray[np.float64]:
        """Coordinates of the distinct nodes, ``a + k*h``."""
        return self.a + self.h * np.arange(self.n_unknowns)


def uniform_1d_periodic(a: float, b: float, n_nodes: int) -> Mesh1DPeriodic:
    """Build a uniform periodic 1D mesh.

    Raises:
        InvalidMeshError: If ``n_nodes < 3`` or ``b <= a``.
    """
    if n_nodes < 3:
        raise InvalidMeshError(f"need at least 3 nodes, got {n_nodes}")
    if not b > a:
        raise InvalidMeshError(f"empty interval [{a}, {b}]")
    return Mesh1DPeriodic(a=a, b=b, n_nodes=n_nodes)


@dataclass(frozen=True)
class SimplicialMesh:
    """Conforming simplicial mesh in 1, 2 or 3 dimensions.

    Attributes:
        dim: Spatial dimension.
        nodes: Node coordinates, shape ``(N, dim)``.
        elements: Zero-based vertex indices, shape ``(E, dim + 1)``.
        boundary_nodes: Sorted indices of nodes on the domain boundary.
    """

    dim: int
    nodes: NDArray[np.float64]
    elements: NDArray[np.int64]
    boundary_nodes: NDArray[np.int64] = field(
        default_factory=lambda: np.zeros(0, dtype=np.int64)
    )

    def __post_init__(self) -> None:
        if self.dim not in (1, 2, 3):
            raise InvalidMeshError(f"dimension must be 1, 2 or 3, got {self.dim}")
        nodes = np.asarray(self.nodes, dtype=np.float64)
        elements = np.asarray(self.elements, dtype=np.int64)
        boundary = np.unique(np.asarray(self.boundary_nodes, dtype=np.int64))
        if nodes.ndim != 2 or nodes.shape[1] != self.dim:
            raise InvalidMeshError(f"nodes must have shape (N, {self.dim})")
        if elements.ndim != 2 or elements.shape[1] != self.dim + 1:
            raise InvalidMeshError(f"elements must have shape (E, {self.dim + 1})")
        n = nodes.shape[0]
        for name, index in (("element", elements), ("boundary", boundary)):
            if index.size and (index.min() < 0 or index.max() >= n):
                raise InvalidMeshError(f"{name} node index out of range [0, {n})")
        nodes.setflags(write=False)
        elements.setflags(write=False)
        boundary.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "boundary_nodes", boundary)

    @property
    def n_nodes(self) -> int:
        return int(self.nodes.shape[0])

    @property
    def n_elements(self) -> int:
        return int(self.elements.shape[0])

    @property
    def interior_nodes(self) -> NDArray[np.int64]:
        """Sorted indices of the nodes not on the boundary."""
        return np.setdiff1d(np.arange(self.n_nodes), self.boundary_nodes)

    def signed_volumes(self) -> NDArray[np.float64]:
        """Signed element measures."""
        return _signed_volumes(self.nodes, self.elements)

    def element_volumes(self) -> NDArray[np.float64]:
        """Element measures (length, area or volume)."""
        return np.abs(self.signed_volumes())

    def measure(self) -> float:
        """Total measure of the mesh."""
        return float(self.element_volumes().sum())


MeshLike = Mesh1DPeriodic | SimplicialMesh


def _signed_volumes(nodes: NDArray[np.float64], elements: NDArray[np.int64]) -> NDArray[np.float64]:
    dim = nodes.shape[1]
    if elements.shape[0] == 0:
        return np.zeros(0)
    edges = nodes[elements[:, 1:]] - nodes[elements[:, :1]]
    return np.linalg.det(edges) / math.factorial(dim)


def _oriented(nodes: NDArray[np.float64], elements: NDArray[np.int64]) -> NDArray[np.int64]:
    """Swap the first two vertices of negatively oriented elements."""
    elements = np.array(elements, dtype=np.int64)
    flip = _signed_volumes(nodes, elements) < 0.0
    elements[flip, :2] = elements[flip, 1::-1]
    return elements


def _cell_elements(dim: int, counts: tuple[int, ...]) -> NDArray[np.int64]:
    """Split every tensor cell into simplices (Kuhn split in 3D)."""
    strides = [1]
    for count in counts[:-1]:
        strides.append(strides[-1] * count)
    cell_ranges = [np.arange(count - 1) for count in counts]
    corners = np.meshgrid(*cell_ranges, indexing="ij")
    base = sum(c.ravel() * s for c, s in zip(corners, strides, strict=True))
    base = np.sort(np.asarray(base, dtype=np.int64))

    if dim == 1:
        return np.stack([base, base + 1], axis=1)
    if dim == 2:
        sx, sy = strides
        return np.concatenate(
            [
                np.stack([base, base + sx, base + sx + sy], axis=1),
                np.stack([base, base + sx + sy, base + sy], axis=1),
            ]
        )
    simplices = []
    for order in permutations(range(3)):
        offsets = [0]
        for axis in order:
            offsets.append(offsets[-1] + strides[axis])
        simplices.append(np.stack([base + o for o in offsets], axis=1))
    return np.concatenate(simplices)


def structured_simplicial(
    dim: int, counts: tuple[int, ...], bounds: Bounds | None = None
) -> SimplicialMesh:
    """Tensor grid split into simplices.

    Nodes are numbered with x fastest. Each cell gives two triangles in 2D and
    six tetrahedra sharing the main diagonal in 3D.

    Args:
        dim: Spatial dimension (1, 2 or 3).
        counts: Nodes per axis, each at least 2.
        bounds: ``(lo, hi)`` per axis; the unit box by default.

    Returns:
        Positively oriented mesh with its boundary nodes marked.

    Raises:
        InvalidMeshError: On bad counts or degenerate bounds.
    """
    if dim not in (1, 2, 3):
        raise InvalidMeshError(f"dimension must be 1, 2 or 3, got {dim}")
    counts = tuple(int(c) for c in counts)
    if len(counts) != dim or any(c < 2 for c in counts):
        raise InvalidMeshError(f"need {dim} node counts, each >= 2, got {counts}")
    if bounds is None:
        bounds = tuple((0.0, 1.0) for _ in range(dim))
    if len(bounds) != dim or any(not hi > lo for lo, hi in bounds):
        raise InvalidMeshError(f"degenerate bounds {bounds}")

    axes = [np.linspace(lo, hi, c) for (lo, hi), c in zip(bounds, counts, strict=True)]
    grids = np.meshgrid(*axes[::-1], indexing="ij")
    nodes = np.stack([g.ravel() for g in grids[::-1]], axis=1)

    indices = np.meshgrid(*[np.arange(c) for c in counts[::-1]], indexing="ij")[::-1]
    on_boundary = np.zeros(nodes.shape[0], dtype=bool)
    for idx, count in zip(indices, counts, strict=True):
        flat = idx.ravel()
        on_boundary |= (flat == 0) | (flat == count - 1)

    elements = _oriented(nodes, _cell_elements(dim, counts))
    return SimplicialMesh(
        dim=dim,
        nodes=nodes,
        elements=elements,
        boundary_nodes=np.flatnonzero(on_boundary),
    )


def _min_edge_lengths(mesh: SimplicialMesh) -> NDArray[np.float64]:
    lengths = np.full(mesh.n_nodes, np.inf)
    k = mesh.dim + 1
    for i in range(k):
        for j in range(i + 1, k):
            a, b = mesh.elements[:, i], mesh.elements[:, j]
            edge = np.linalg.norm(mesh.nodes[a] - mesh.nodes[b], axis=1)
            np.minimum.at(lengths, a, edge)
            np.minimum.at(lengths, b, edge)
    return lengths


def perturb_interior(mesh: SimplicialMesh, amplitude: float, seed: int) -> SimplicialMesh:
    """Randomly displace interior nodes, keeping connectivity.

    Each coordinate of an interior node moves by a seeded uniform offset of at
    most ``amplitude`` times the shortest edge at that node. Nodes of inverted
    elements have their offsets halved, at most ``PERTURBATION_RETRIES`` times.

    Raises:
        DomainError: If ``amplitude`` is outside ``[0, 0.5)``.
        DegenerateElementError: If positive volumes cannot be restored.
    """
    if not 0.0 <= amplitude < 0.5:
        raise DomainError(f"amplitude must lie in [0, 0.5), got {amplitude}")
    if amplitude == 0.0:
        return mesh

    rng = np.random.default_rng(seed)
    scale = amplitude * _min_edge_lengths(mesh)
    scale[~np.isfinite(scale)] = 0.0
    offsets = rng.uniform(-1.0, 1.0, size=mesh.nodes.shape) * scale[:, None]
    offsets[mesh.boundary_nodes] = 0.0

    for attempt in range(PERTURBATION_RETRIES + 1):
        nodes = mesh.nodes + offsets
        bad = np.flatnonzero(_signed_volumes(nodes, mesh.elements) <= 0.0)
        if bad.size == 0:
            return SimplicialMesh(
                dim=mesh.dim,
                nodes=nodes,
                elements=mesh.elements,
                boundary_nodes=mesh.boundary_nodes,
            )
        if attempt == PERTURBATION_RETRIES:
            break
        offending = np.unique(mesh.elements[bad])
        offsets[offending] *= 0.5
        logger.debug(
            "perturb_interior: %d inverted elements, halving %d offsets (retry %d)",
            bad.size,
            offending.size,
            attempt + 1,
        )
    raise DegenerateElementError(
        "perturbation leaves inverted elements", element=int(bad[0])
    )


# --------------------------------------------------------------------------- #
# text format


def write_mesh(mesh: SimplicialMesh) -> str:
    """Serialize a mesh to the text format."""
    lines = [f"dim {mesh.dim}", f"nodes {mesh.n_nodes}"]
    lines.extend(" ".join(f"{x:.17g}" for x in row) for row in mesh.nodes)
    lines.append(f"elements {mesh.n_elements}")
    lines.extend(" ".join(str(int(i)) for i in row) for row in mesh.elements)
    lines.append(f"boundary {mesh.boundary_nodes.size}")
    lines.extend(str(int(i)) for i in mesh.boundary_nodes)
    return "\n".join(lines) + "\n"


class _LineReader:
    def __init__(self, text: str) -> None:
        self.lines = text.splitlines()
        self.position = 0

    def next(self, what: str) -> tuple[int, str]:
        number = self.position + 1
        if self.position >= len(self.lines):
            raise MeshParseError(f"missing {what}", line_number=number)
        line = self.lines[self.position]
        self.position += 1
        if not line.strip():
            raise MeshParseError(f"blank line where {what} was expected", line_number=number)
        return number, line

    def header(self, keyword: str) -> int:
        number, line = self.next(f"'{keyword}' header")
        parts = line.split()
        if len(parts) != 2 or parts[0] != keyword:
            raise MeshParseError(f"expected '{keyword} <count>'", line_number=number)
        try:
            value = int(parts[1])
        except ValueError:
            raise MeshParseError(f"bad count {parts[1]!r}", line_number=number) from None
        if value < 0:
            raise MeshParseError(f"negative count {value}", line_number=number)
        return value

    def indices(self, what: str, width: int, limit: int) -> list[int]:
        number, line = self.next(what)
        parts = line.split()
        if len(parts) != width:
            raise MeshParseError(f"{what} needs {width} indices", line_number=number)
        try:
            values = [int(v) for v in parts]
        except ValueError:
            raise MeshParseError(f"bad index in {what}", line_number=number) from None
        for value in values:
            if not 0 <= value < limit:
                raise MeshParseError(
                    f"node index {value} out of range [0, {limit})", line_number=number
                )
        return values


def read_mesh(text: str) -> SimplicialMesh:
    """Parse the text format produced by :func:`write_mesh`.

    Elements with negative orientation are stored with their first two vertices
    swapped, so writing the result back does not reproduce such input verbatim.

    Raises:
        MeshParseError: On malformed input, naming the 1-based line.
    """
    reader = _LineReader(text)
    dim = reader.header("dim")
    if dim not in (1, 2, 3):
        raise MeshParseError(f"dimension must be 1, 2 or 3, got {dim}", line_number=1)

    n_nodes = reader.header("nodes")
    nodes = np.empty((n_nodes, dim))
    for k in range(n_nodes):
        number, line = reader.next("node coordinates")
        parts = line.split()
        if len(parts) != dim:
            raise MeshParseError(f"node needs {dim} coordinates", line_number=number)
        try:
            nodes[k] = [float(v) for v in parts]
        except ValueError:
            raise MeshParseError("bad coordinate", line_number=number) from None

    n_elements = reader.header("elements")
    elements = np.array(
        [reader.indices("element", dim + 1, n_nodes) for _ in range(n_elements)],
        dtype=np.int64,
    ).reshape(n_elements, dim + 1)

    n_boundary = reader.header("boundary")
    boundary = np.array(
        [reader.indices("boundary node", 1, n_nodes)[0] for _ in range(n_boundary)],
        dtype=np.int64,
    )

    if reader.position < len(reader.lines):
        raise MeshParseError("trailing content after boundary block", line_number=reader.position + 1)
    return SimplicialMesh(
        dim=dim,
        nodes=nodes,
        elements=_oriented(nodes, elements),
        boundary_nodes=boundary,
    )


def load_mesh(path: str | Path) -> SimplicialMesh:
    """Read a mesh file."""
    return read_mesh(Path(path).read_text(encoding="utf-8"))


def save_mesh(mesh: SimplicialMesh, path: str | Path) -> None:
    """Write a mesh file."""
    Path(path).write_text(write_mesh(mesh), encoding="utf-8")


class MeshSpec(BaseModel):
    """Recipe for a generated mesh: ``structured:NX,NY[,NZ]`` or
    ``perturbed:NX,NY[,NZ]:AMPLITUDE:SEED``."""

    model_config = ConfigDict(frozen=True)

    counts: tuple[int, ...] = Field(..., min_length=1, max_length=3, description="Nodes per axis")
    amplitude: float = Field(0.0, ge=0.0, lt=0.5, description="Interior perturbation")
    seed: int = Field(0, description="Perturbation seed")

    @property
    def dim(self) -> int:
        return len(self.counts)

    @classmethod
    def parse(cls, text: str) -> "MeshSpec":
        """Parse a mesh recipe string.

        Raises:
            ValidationError: If the recipe is malformed.
        """
        parts = text.strip().split(":")
        try:
            counts = tuple(int(c) for c in parts[1].split(",")) if len(parts) > 1 else ()
            if parts[0] == "structured" and len(parts) == 2:
                return cls(counts=counts)
            if parts[0] == "perturbed" and len(parts) == 4:
                return cls(counts=counts, amplitude=float(parts[2]), seed=int(parts[3]))
        except ValueError as e:
            raise ValidationError(f"Invalid mesh spec {text!r}: {e}") from e
        raise ValidationError(
            f"Invalid mesh spec {text!r}: expected structured:NX,NY[,NZ] "
            "or perturbed:NX,NY[,NZ]:AMPLITUDE:SEED"
        )

    def build(self, bounds: Bounds | None = None) -> SimplicialMesh:
        """Generate the mesh."""
        mesh = structured_simplicial(self.dim, self.counts, bounds)
        if self.amplitude > 0.0:
            mesh = perturb_interior(mesh, self.amplitude, self.seed)
        return mesh

    def __str__(self) -> str:
        counts = ",".join(str(c) for c in self.counts)
        if self.amplitude > 0.0:
            return f"perturbed:{counts}:{self.amplitude:g}:{self.seed}"
        return f"structured:{counts}"

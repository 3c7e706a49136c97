"""Exception classes for the masslump library."""

from .errors import (
    AllNodesExcludedError,
    DegenerateElementError,
    DomainError,
    InternalMismatchError,
    InvalidMeshError,
    MassLumpError,
    MeshParseError,
    NoRootError,
    NonFiniteError,
    NonPositiveLumpingError,
    SignChangeError,
    SolveFailureError,
    ValidationError,
)

__all__ = [
    "MassLumpError",
    "ValidationError",
    "DomainError",
    "NoRootError",
    "SignChangeError",
    "AllNodesExcludedError",
    "InvalidMeshError",
    "DegenerateElementError",
    "NonPositiveLumpingError",
    "SolveFailureError",
    "NonFiniteError",
    "InternalMismatchError",
    "MeshParseError",
]

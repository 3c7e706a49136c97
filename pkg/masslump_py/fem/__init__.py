"""Linear finite elements: meshes, matrices and time integration."""

from .assembly import (
    FemMatrices,
    LumpedMass,
    SparseMatrix,
    assemble_convection,
    assemble_diffusion,
    assemble_mass,
    assemble_system,
    contraction_estimate,
    correction_apply,
    correction_bound,
    lump,
)
from .integrate import (
    SemiDiscreteSystem,
    StateVector,
    evolve,
    evolve_symbol_exact,
    harmonic_state,
    iter_steps,
    rhs,
    rk4_step,
    select_time_step,
    solve_mass,
    stability_time_step,
)
from .mesh import (
    Mesh1DPeriodic,
    MeshLike,
    MeshSpec,
    SimplicialMesh,
    load_mesh,
    perturb_interior,
    read_mesh,
    save_mesh,
    structured_simplicial,
    uniform_1d_periodic,
    write_mesh,
)

__all__ = [
    "Mesh1DPeriodic",
    "SimplicialMesh",
    "MeshLike",
    "MeshSpec",
    "uniform_1d_periodic",
    "structured_simplicial",
    "perturb_interior",
    "read_mesh",
    "write_mesh",
    "load_mesh",
    "save_mesh",
    "SparseMatrix",
    "LumpedMass",
    "FemMatrices",
    "assemble_mass",
    "lump",
    "assemble_diffusion",
    "assemble_convection",
    "assemble_system",
    "correction_apply",
    "correction_bound",
    "contraction_estimate",
    "StateVector",
    "SemiDiscreteSystem",
    "rhs",
    "solve_mass",
    "rk4_step",
    "iter_steps",
    "evolve",
    "evolve_symbol_exact",
    "stability_time_step",
    "select_time_step",
    "harmonic_state",
]

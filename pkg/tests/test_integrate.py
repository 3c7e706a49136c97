"""Tests for the semi-discrete system and RK4 time stepping."""

import math
from unittest.mock import patch

import numpy as np
import pytest
from scipy.sparse import linalg as splinalg

from masslump_py.exceptions.errors import DomainError, NonFiniteError, SolveFailureError
from masslump_py.fem.assembly import assemble_mass, assemble_system
from masslump_py.fem.integrate import (
    SemiDiscreteSystem,
    StateVector,
    evolve,
    evolve_symbol_exact,
    harmonic_state,
    iter_steps,
    restrict,
    rhs,
    rk4_step,
    select_time_step,
    solve_mass,
    stability_time_step,
)
from masslump_py.fem.mesh import perturb_interior, structured_simplicial, uniform_1d_periodic
from masslump_py.fourier.symbols import exact_symbol, harmonic_abs_error, harmonic_rel_error, scheme_symbol
from masslump_py.models.params import SchemeParams
from masslump_py.models.schemes import SchemeSelector

SCHEMES = [
    SchemeSelector.lumped(),
    SchemeSelector.corrected(1),
    SchemeSelector.corrected(3),
    SchemeSelector.consistent(),
]


@pytest.fixture
def periodic_setup():
    """Example 1 on a coarse periodic mesh: (mesh, system, params)."""
    mesh = uniform_1d_periodic(0.0, 10.0, 51)
    system = SemiDiscreteSystem.periodic(assemble_system(mesh, 0.01, 1.0))
    params = SchemeParams(lam=1.0, kappa=0.01, h=mesh.h, p=3 * math.pi)
    return mesh, system, params


class TestRungeKutta:
    """Test the RK4 integrator."""

    def test_single_step(self):
        """Test one step of y' = -y."""
        state = rk4_step(lambda t, y: -y, StateVector(values=np.array([1.0]), t=0.0), 0.1)
        assert state.values[0] == pytest.approx(0.90483750, abs=1e-10)
        assert state.t == pytest.approx(0.1)

    def test_fourth_order(self):
        """Test the global error drops by 16 when the step halves."""

        def solve(tau):
            state = StateVector(values=np.array([1.0]), t=0.0)
            for _ in range(round(1.0 / tau)):
                state = rk4_step(lambda t, y: -y + math.sin(t), state, tau)
            return state.values[0]

        exact = 1.5 * math.exp(-1.0) + 0.5 * (math.sin(1.0) - math.cos(1.0))
        coarse, fine = abs(solve(0.1) - exact), abs(solve(0.05) - exact)
        assert math.log2(coarse / fine) == pytest.approx(4.0, abs=0.1)

    def test_invalid_step(self):
        """Test tau must be positive."""
        with pytest.raises(DomainError):
            rk4_step(lambda t, y: y, StateVector(values=np.zeros(1), t=0.0), 0.0)


class TestSemiDiscreteSystem:
    """Test right-hand sides of the semi-discrete schemes."""

    @pytest.mark.parametrize("selector", SCHEMES, ids=lambda s: s.label)
    def test_harmonic_eigenvector(self, periodic_setup, selector):
        """Test rhs of a periodic harmonic equals its symbol times the harmonic."""
        mesh, system, params = periodic_setup
        v = harmonic_state(mesh, params.p)
        derivative = rhs(selector, system, StateVector(values=v, t=0.0))
        expected = scheme_symbol(selector, params).to_complex() * v
        np.testing.assert_allclose(derivative, expected, rtol=1e-10)

    def test_harmonic_state(self, periodic_setup):
        """Test nodal values of the harmonic."""
        mesh, _, params = periodic_setup
        values = harmonic_state(mesh, params.p, amplitude=2.0)
        assert values.shape == (50,)
        assert values[0] == 2.0
        assert values[1] == pytest.approx(2.0 * np.exp(1j * params.p * mesh.h))

    @pytest.mark.parametrize("selector", SCHEMES, ids=lambda s: s.label)
    def test_linear_solution_is_exact(self, selector):
        """Test u = x + 2y - 4t is reproduced with exact Dirichlet data."""
        mesh = perturb_interior(structured_simplicial(2, (6, 6)), 0.3, seed=1)
        velocity = np.array([1.0, 1.5])
        slope = np.array([1.0, 2.0])
        rate = -float(velocity @ slope)

        def exact(t, nodes):
            return nodes @ slope + rate * t

        boundary = mesh.boundary_nodes
        system = SemiDiscreteSystem.dirichlet(
            assemble_system(mesh, 0.7, velocity),
            dim=2,
            interior=mesh.interior_nodes,
            boundary=boundary,
            boundary_values=lambda t: exact(t, mesh.nodes[boundary]),
            boundary_rates=lambda t: np.full(boundary.size, rate),
        )
        interior = mesh.nodes[mesh.interior_nodes]
        initial = StateVector(values=exact(0.0, interior), t=0.0)
        final = evolve(selector, system, initial, 0.2, stability_time_step(system, selector))
        np.testing.assert_allclose(final.values, exact(0.2, interior), atol=1e-11)
        full = system.full_state(final.t, final.values)
        np.testing.assert_allclose(full, exact(0.2, mesh.nodes), atol=1e-11)

    def test_dirichlet_needs_interior(self):
        """Test a mesh without interior nodes is rejected."""
        mesh = structured_simplicial(2, (2, 2))
        with pytest.raises(DomainError):
            SemiDiscreteSystem.dirichlet(
                assemble_system(mesh, 1.0, (1.0, 0.0)),
                dim=2,
                interior=mesh.interior_nodes,
                boundary=mesh.boundary_nodes,
                boundary_values=lambda t: np.zeros(4),
                boundary_rates=lambda t: np.zeros(4),
            )

    def test_convection_scale(self, periodic_setup):
        """Test the time-dependent convection factor enters the load."""
        mesh, _, params = periodic_setup
        matrices = assemble_system(mesh, 0.01, 1.0)
        scaled = SemiDiscreteSystem.periodic(matrices, convection_scale=lambda t: 1.0 / (t + 1.0))
        v = harmonic_state(mesh, params.p)
        expected = -(matrices.diffusion @ v) - 0.5 * (matrices.convection @ v)
        np.testing.assert_allclose(scaled.load(1.0, v), expected)


class TestMassSolve:
    """Test the conjugate-gradient mass solve."""

    def test_matches_direct_solve(self):
        """Test real and complex right-hand sides against a direct solve."""
        mass = assemble_mass(perturb_interior(structured_simplicial(3, (4, 5, 4)), 0.3, seed=3))
        rng = np.random.default_rng(4)
        b = rng.normal(size=mass.shape[0]) + 1j * rng.normal(size=mass.shape[0])
        expected = splinalg.spsolve(mass.tocsc(), b)
        np.testing.assert_allclose(solve_mass(mass, b), expected, rtol=1e-10, atol=1e-12)

    def test_zero_right_hand_side(self):
        """Test b = 0 returns zeros without iterating."""
        mass = assemble_mass(structured_simplicial(2, (3, 3)))
        np.testing.assert_array_equal(solve_mass(mass, np.zeros(9)), np.zeros(9))

    def test_failure(self):
        """Test a stalled solve raises with its residual."""
        mass = assemble_mass(structured_simplicial(2, (3, 3)))
        with patch("masslump_py.fem.integrate.splinalg.cg", return_value=(np.zeros(9), 5)):
            with pytest.raises(SolveFailureError) as exc_info:
                solve_mass(mass, np.ones(9))
        assert exc_info.value.residual == pytest.approx(1.0)

    def test_restrict(self):
        """Test submatrix extraction."""
        mass = assemble_mass(structured_simplicial(2, (3, 3)))
        block = restrict(mass, np.array([4]), np.array([0, 4, 8]))
        assert block.shape == (1, 3)
        assert block[0, 1] == mass[4, 4]


class TestTimeStepping:
    """Test step control and evolution."""

    def test_steps_land_on_end(self, periodic_setup):
        """Test the last step is shortened to reach t_end."""
        mesh, system, params = periodic_setup
        initial = StateVector(values=harmonic_state(mesh, params.p), t=0.0)
        times = [s.t for s in iter_steps(SchemeSelector.lumped(), system, initial, 0.25, 0.1)]
        assert times == pytest.approx([0.1, 0.2, 0.25])

    def test_zero_duration(self, periodic_setup):
        """Test evolving to the initial time returns the initial state."""
        mesh, system, params = periodic_setup
        initial = StateVector(values=harmonic_state(mesh, params.p), t=0.0)
        assert evolve(SchemeSelector.lumped(), system, initial, 0.0, 0.1) is initial

    def test_invalid_arguments(self, periodic_setup):
        """Test a bad step or a backwards end time."""
        mesh, system, params = periodic_setup
        initial = StateVector(values=harmonic_state(mesh, params.p), t=1.0)
        with pytest.raises(DomainError):
            list(iter_steps(SchemeSelector.lumped(), system, initial, 2.0, 0.0))
        with pytest.raises(DomainError):
            list(iter_steps(SchemeSelector.lumped(), system, initial, 0.5, 0.1))

    def test_blow_up(self):
        """Test an unstable step ends in NonFiniteError."""
        mesh = uniform_1d_periodic(0.0, 1.0, 11)
        system = SemiDiscreteSystem.periodic(assemble_system(mesh, 1.0, 0.0))
        initial = StateVector(values=np.cos(2 * math.pi * mesh.coordinates()) + np.cos(math.pi * np.arange(10)), t=0.0)
        with pytest.raises(NonFiniteError):
            evolve(SchemeSelector.lumped(), system, initial, 40.0, 1.0)

    def test_stability_ratio(self, periodic_setup):
        """Test the series bound scales the 1D step by 1, 3/5 and 1/3."""
        _, system, _ = periodic_setup
        lumped = stability_time_step(system, SchemeSelector.lumped())
        assert stability_time_step(system, SchemeSelector.corrected(1)) == pytest.approx(lumped * 3 / 5)
        assert stability_time_step(system, SchemeSelector.consistent()) == pytest.approx(lumped / 3)

    def test_requested_step(self, periodic_setup):
        """Test a requested step is capped by the stability limit."""
        _, system, _ = periodic_setup
        limit = stability_time_step(system, SchemeSelector.lumped())
        assert select_time_step(system, SchemeSelector.lumped(), requested=limit / 4) == limit / 4
        assert select_time_step(system, SchemeSelector.lumped(), requested=10 * limit) == limit
        with pytest.raises(DomainError):
            select_time_step(system, SchemeSelector.lumped(), requested=-1.0)

    @pytest.mark.parametrize("selector", SCHEMES, ids=lambda s: s.label)
    def test_stepped_matches_symbol_exact(self, periodic_setup, selector):
        """Test RK4 with the Richardson step reproduces the time-exact error."""
        mesh, system, params = periodic_setup
        t_end = 0.1
        omega = scheme_symbol(selector, params).to_complex()
        rel, absolute = evolve_symbol_exact(selector, params, t_end)
        tau = select_time_step(system, selector, omega=omega, t_end=t_end, spatial_error=rel)
        assert tau <= stability_time_step(system, selector)
        initial = StateVector(values=harmonic_state(mesh, params.p), t=0.0)
        final = evolve(selector, system, initial, t_end, tau)
        exact = np.exp(t_end * exact_symbol(params).to_complex()) * initial.values
        stepped = float(np.max(np.abs(final.values - exact)) / np.max(np.abs(exact)))
        assert stepped == pytest.approx(rel, rel=1e-2)
        assert absolute == pytest.approx(
            harmonic_abs_error(scheme_symbol(selector, params), exact_symbol(params), t_end)
        )
        assert rel == harmonic_rel_error(scheme_symbol(selector, params), exact_symbol(params), t_end)

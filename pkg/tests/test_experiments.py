"""Tests for exact solutions, error norms, presets and the experiment runners."""

import math

import numpy as np
import pytest

from masslump_py.exceptions.errors import (
    AllNodesExcludedError,
    DomainError,
    SignChangeError,
    ValidationError,
)
from masslump_py.experiments.exact import (
    ConvDiff2D,
    ConvDiff3D,
    Decay3D,
    ExactSolution,
    Harmonic1D,
    Transport2D,
    Transport3D,
    exact_eval,
)
from masslump_py.experiments.norms import (
    empirical_order,
    error_norms,
    error_norms_from_values,
)
from masslump_py.experiments.presets import (
    EXAMPLES,
    PRESETS,
    PresetKind,
    get_example,
    get_preset,
)
from masslump_py.experiments.runners import (
    DIFFUSIVE_PAIRS,
    TRANSPORT_PAIRS,
    consistent_proximity,
    default_pairs,
    run_convergence_1d,
    run_fem,
)
from masslump_py.fem.integrate import StateVector
from masslump_py.fem.mesh import MeshSpec, structured_simplicial, uniform_1d_periodic
from masslump_py.models.reports import ConvergenceMode
from masslump_py.models.schemes import SchemeSelector


def _residual(sol, t, points, step=1e-4):
    """``u_t + s(t) v.grad(u) - kappa lap(u)`` by central differences, and the term scale."""
    u_t = sol.time_derivative(t, points)
    velocity = sol.velocity(points) * sol.convection_scale(t)
    advection = np.zeros(points.shape[0])
    laplacian = np.zeros(points.shape[0])
    center = sol.evaluate(t, points)
    for axis in range(points.shape[1]):
        shift = np.zeros(points.shape[1])
        shift[axis] = step
        plus, minus = sol.evaluate(t, points + shift), sol.evaluate(t, points - shift)
        advection += velocity[:, axis] * (plus - minus) / (2 * step)
        laplacian += (plus - 2 * center + minus) / step**2
    residual = u_t + advection - sol.kappa * laplacian
    scale = np.abs(u_t) + np.abs(advection) + sol.kappa * np.abs(laplacian) + 1.0
    return residual, scale


class TestExactSolutions:
    """Test the benchmark solutions."""

    @pytest.mark.parametrize(
        "name, point, expected",
        [("example3", (0.0, 0.0), 100.0), ("example6", (0.0, 0.0, 0.0), 210.0), ("example1", 0.0, 1.0)],
    )
    def test_point_values(self, name, point, expected):
        """Test known values at t = 0."""
        assert exact_eval(get_example(name), 0.0, point) == pytest.approx(expected)

    def test_incomplete_solution_rejected(self):
        """Test a solution missing its time derivative cannot be created."""

        class NoDerivative(ExactSolution):
            @property
            def kappa(self):
                return 0.0

            def evaluate(self, t, points):
                return np.zeros(len(points))

            def velocity(self, points):
                return np.zeros_like(points)

        with pytest.raises(TypeError, match="time_derivative"):
            NoDerivative()

    def test_harmonic_is_complex(self):
        """Test the harmonic decays and travels with its symbol."""
        sol = Harmonic1D(p=2.0, lam=1.5, diffusion=0.1)
        value = exact_eval(sol, 1.0, 0.5)
        assert isinstance(value, complex)
        expected = np.exp(-0.1 * 4.0) * np.exp(1j * 2.0 * (0.5 - 1.5))
        assert value == pytest.approx(expected)
        assert sol.omega == pytest.approx(complex(-0.4, -3.0))

    @pytest.mark.parametrize(
        "sol",
        [ConvDiff2D(), Transport2D(), ConvDiff3D(), Decay3D(), Transport3D()],
        ids=lambda s: type(s).__name__,
    )
    def test_solves_the_equation(self, sol):
        """Test u_t + v.grad(u) = kappa lap(u) at random points."""
        points = np.random.default_rng(5).uniform(0.1, 0.9, size=(20, sol.dim))
        for t in (0.0, 0.3):
            residual, scale = _residual(sol, t, points)
            assert np.all(np.abs(residual) <= 1e-5 * scale)

    def test_time_derivative(self):
        """Test the time derivative of the stretched decay against a difference quotient."""
        sol = Decay3D()
        points = np.array([[0.2, 0.4, 0.6], [1.0, 0.0, 0.5]])
        dt = 1e-6
        quotient = (sol.evaluate(0.3 + dt, points) - sol.evaluate(0.3 - dt, points)) / (2 * dt)
        np.testing.assert_allclose(sol.time_derivative(0.3, points), quotient, rtol=1e-7)

    def test_frozen(self):
        """Test examples cannot be mutated."""
        with pytest.raises(Exception):
            EXAMPLES["example3"].amplitude = 1.0


class TestNorms:
    """Test error norms and empirical orders."""

    def test_norms(self):
        """Test the three norms on a two-node example."""
        report = error_norms_from_values(np.array([4.0, -3.0]), np.array([1.0, 1.0]), scheme="1")
        assert report.scheme == "1"
        assert report.inf_abs == pytest.approx(4.0)
        assert report.inf_rel == pytest.approx(4.0)
        assert report.l2_rel == pytest.approx(5.0 / math.sqrt(2.0))
        assert report.excluded_nodes == 0

    def test_exclusion(self):
        """Test nodes where the exact solution vanishes are left out of the relative max norm."""
        report = error_norms_from_values(np.array([1.0, 1.0]), np.array([0.0, 1.0]))
        assert report.excluded_nodes == 1
        assert report.inf_rel == 0.0
        assert report.inf_abs == 1.0
        assert report.l2_rel == pytest.approx(1.0)

    def test_all_excluded(self):
        """Test a vanishing exact solution is rejected."""
        with pytest.raises(AllNodesExcludedError):
            error_norms_from_values(np.ones(3), np.zeros(3))

    def test_shape_mismatch(self):
        """Test arrays of different shapes are rejected."""
        with pytest.raises(DomainError):
            error_norms_from_values(np.ones(3), np.ones(4))

    def test_complex_values(self):
        """Test the norms use moduli of complex values."""
        mesh = uniform_1d_periodic(0.0, 10.0, 11)
        sol = Harmonic1D()
        exact = sol.evaluate(0.0, mesh.coordinates())
        report = error_norms(StateVector(values=exact * (1 + 1e-3j), t=0.0), sol, mesh)
        assert report.inf_rel == pytest.approx(1e-3)
        assert report.l2_rel == pytest.approx(1e-3)

    def test_empirical_order(self):
        """Test orders of same-signed values."""
        assert empirical_order(4e-4, 1e-4, 0.1, 0.05) == pytest.approx(2.0)
        assert empirical_order(-8e-3, -1e-3, 0.2, 0.1) == pytest.approx(3.0)

    @pytest.mark.parametrize("a_prev, a_cur", [(1e-3, -1e-4), (0.0, 1e-4), (math.inf, 1.0)])
    def test_order_sign_change(self, a_prev, a_cur):
        """Test mixed signs, zeros and non-finite values have no order."""
        with pytest.raises(SignChangeError):
            empirical_order(a_prev, a_cur, 0.1, 0.05)

    def test_order_mesh_sizes(self):
        """Test the mesh sizes must decrease."""
        with pytest.raises(DomainError):
            empirical_order(1e-3, 1e-4, 0.05, 0.1)


class TestPresets:
    """Test the named examples and table presets."""

    def test_lookup(self):
        """Test known and unknown names."""
        assert get_preset("table2").example == "example1"
        assert get_example("example2").b == 1.0
        with pytest.raises(ValidationError, match="Unknown preset"):
            get_preset("table10")
        with pytest.raises(ValidationError, match="Unknown example"):
            get_example("example8")

    def test_kinds(self):
        """Test which presets sweep 1D meshes and which run FEM meshes."""
        kinds = {name: preset.kind for name, preset in PRESETS.items()}
        assert [n for n, k in kinds.items() if k is PresetKind.CONVERGENCE] == ["table1", "table2", "table3", "table4"]
        assert get_preset("table9").schemes == ("1", "2", "3", "G")

    def test_spatial_meshes(self):
        """Test the spatial presets pair structured and perturbed recipes."""
        specs = get_preset("table7").mesh_specs()
        assert [str(s) for s in specs] == [
            "structured:11,13,15",
            "perturbed:11,13,15:0.3:1",
            "structured:13,15,17",
            "perturbed:13,15,17:0.3:1",
        ]

    def test_default_pairs(self):
        """Test pair defaults follow the presence of diffusion."""
        assert default_pairs(get_example("example1")) == DIFFUSIVE_PAIRS
        assert default_pairs(get_example("example2")) == TRANSPORT_PAIRS


class TestConvergence:
    """Test the 1D convergence sweeps."""

    def test_diffusive_orders(self):
        """Test the empirical orders of the diffusive harmonic on fine meshes."""
        table = run_convergence_1d(get_example("example1"), [1501, 2501])
        expected = {"2,1": 5.8581, "3,2": 7.9605, "G,1": 5.8591, "G,2": 7.9613, "G,3": 9.9687}
        for key, order in expected.items():
            assert table.orders(key)[1] == pytest.approx(order, abs=0.02)
        assert table.orders("2,1")[0] is None

    def test_diffusive_errors(self):
        """Test the relative max-norm errors at N = 501."""
        table = run_convergence_1d(get_example("example1"), [501], schemes=[SchemeSelector.parse("L"), SchemeSelector.parse("1")])
        assert table.rows[0].errors["1"].inf_rel == pytest.approx(2.6315e-4, rel=1e-3)
        assert table.rows[0].errors["L"].inf_rel == pytest.approx(5.5781e-3, rel=1e-3)
        assert table.rows[0].h == pytest.approx(0.02)

    @pytest.mark.parametrize(
        "name, expected",
        [
            ("example1-pure", [7.9952, 10.0019, 7.9959, 10.0045, 11.9966]),
            ("example2", [7.9978, 10.0003, 7.9982, 10.0015, 11.9997]),
        ],
    )
    def test_transport_orders(self, name, expected):
        """Test the pure-transport orders at N = 1101."""
        table = run_convergence_1d(get_example(name), [1001, 1101])
        assert table.pair_keys == ["1,2", "2,3", "1,G", "2,G", "3,G"]
        for key, order in zip(table.pair_keys, expected):
            assert table.orders(key)[1] == pytest.approx(order, abs=0.02)

    @pytest.mark.parametrize(
        "key, negative, positive",
        [
            ("2,1", [483, 484], [485]),
            ("3,2", [265], [266]),
            ("G,1", [483], [484]),
            ("G,2", [265], [266]),
            ("G,3", [259], [260]),
        ],
    )
    def test_threshold_sign_changes(self, key, negative, positive):
        """Test each difference changes sign at its node-count threshold."""
        preset = get_preset("table1")
        table = run_convergence_1d(preset.solution, list(preset.ns), preset.selectors())
        differences = dict(zip(table.n_values, table.difference_rows()[key]))
        gaps = {row.n_nodes: row.pair(key).gap for row in table.rows}
        for n in negative:
            assert differences[n] < 0.0
            assert gaps[n] < 0.0
        for n in positive:
            assert differences[n] > 0.0
            assert gaps[n] > 0.0

    @pytest.mark.parametrize("n", [501, 1101])
    @pytest.mark.parametrize("label", ["L", "1", "2", "3", "G"])
    def test_time_stepped_matches_symbol(self, n, label):
        """Test RK4 columns agree with the closed-form errors."""
        example = get_example("example1")
        schemes = [SchemeSelector.parse(label)]
        exact = run_convergence_1d(example, [n], schemes)
        stepped = run_convergence_1d(example, [n], schemes, mode=ConvergenceMode.TIME_STEPPED)
        assert stepped.mode is ConvergenceMode.TIME_STEPPED
        assert stepped.rows[0].errors[label].inf_rel == pytest.approx(exact.rows[0].errors[label].inf_rel, rel=1e-3)

    def test_explicit_pairs_and_time(self):
        """Test custom pairs and evaluation times."""
        schemes = [SchemeSelector.parse("1"), SchemeSelector.parse("2")]
        table = run_convergence_1d(get_example("example1"), [501, 601], schemes, t=0.05, pairs=[("2", "1")])
        assert table.t == 0.05
        assert table.pair_keys == ["2,1"]
        assert table.schemes == ["1", "2"]

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"ns": [601, 501]},
            {"ns": []},
            {"ns": [501], "pairs": [("G", "1")], "schemes": [SchemeSelector.parse("1")]},
        ],
    )
    def test_invalid(self, kwargs):
        """Test bad node counts and pairs naming schemes that are not run."""
        with pytest.raises(DomainError):
            run_convergence_1d(get_example("example1"), **kwargs)

    def test_needs_harmonic(self):
        """Test planar examples cannot be swept on 1D meshes."""
        with pytest.raises(DomainError):
            run_convergence_1d(get_example("example3"), [11, 21])


class TestFemRuns:
    """Test FEM runs on simplicial meshes."""

    SCHEMES = [SchemeSelector.lumped(), SchemeSelector.corrected(1), SchemeSelector.corrected(2), SchemeSelector.consistent()]

    def test_zero_duration(self):
        """Test a run of length zero reproduces the exact data."""
        mesh = structured_simplicial(2, (6, 6))
        reports = run_fem(get_example("example3"), mesh, self.SCHEMES, t_end=0.0)
        assert [r.scheme for r in reports] == ["L", "1", "2", "G"]
        for report in reports:
            assert report.inf_abs == pytest.approx(0.0, abs=1e-12)
            assert report.l2_rel == pytest.approx(0.0, abs=1e-14)

    def test_short_planar_run(self):
        """Test errors are small and finite on a coarse planar mesh."""
        mesh = MeshSpec.parse("perturbed:9,9:0.3:1").build()
        reports = run_fem(get_example("example3"), mesh, self.SCHEMES, t_end=0.01)
        for report in reports:
            assert 0.0 < report.inf_rel < 0.1
            assert math.isfinite(report.l2_rel)

    def test_many_corrections_approach_consistent(self):
        """Test a long Neumann series reproduces the consistent run."""
        mesh = structured_simplicial(2, (7, 7))
        schemes = [SchemeSelector.corrected(80), SchemeSelector.consistent()]
        corrected, consistent = run_fem(get_example("example4"), mesh, schemes, t_end=0.02)
        assert corrected.inf_abs == pytest.approx(consistent.inf_abs, rel=1e-5)
        assert corrected.l2_rel == pytest.approx(consistent.l2_rel, rel=1e-5)

    def test_spatial_decay(self):
        """Test the stretched decay runs with its time-dependent field."""
        mesh = structured_simplicial(3, (5, 5, 5))
        reports = run_fem(get_example("example6"), mesh, [SchemeSelector.corrected(1)], t_end=0.02)
        assert reports[0].l2_rel < 0.05
        assert math.isfinite(reports[0].inf_rel)

    def test_consistent_proximity(self):
        """Test more corrections move closer to the consistent solution."""
        mesh = structured_simplicial(2, (7, 7))
        distances = consistent_proximity(get_example("example3"), mesh, [1, 2, 3], t_end=0.01)
        assert list(distances) == [1, 2, 3]
        assert distances[3] < distances[2] < distances[1]
        with pytest.raises(DomainError):
            consistent_proximity(get_example("example3"), mesh, [0])

    def test_dimension_mismatch(self):
        """Test a planar example on a spatial mesh is rejected."""
        with pytest.raises(DomainError):
            run_fem(get_example("example3"), structured_simplicial(3, (3, 3, 3)), self.SCHEMES)
        with pytest.raises(DomainError):
            run_fem(get_example("example3"), structured_simplicial(2, (3, 3)), [])
        with pytest.raises(DomainError):
            run_fem(get_example("example3"), structured_simplicial(2, (3, 3)), self.SCHEMES, t_end=-1.0)


def _non_decreasing(values):
    return all(a <= b for a, b in zip(values, values[1:]))


def _decreasing(values):
    return all(a > b for a, b in zip(values, values[1:]))


class TestErrorChains:
    """Test the ordering of scheme errors on the preset meshes."""

    def _reports(self, preset_name, mesh_index=0):
        preset = get_preset(preset_name)
        mesh = preset.mesh_specs()[mesh_index].build()
        return run_fem(get_example(preset.example), mesh, preset.selectors())

    def test_planar_convection_diffusion(self):
        """Test errors grow with the number of corrections when diffusion dominates."""
        reports = self._reports("table5")
        assert [r.scheme for r in reports] == ["1", "2", "3", "4", "G"]
        assert _non_decreasing([r.inf_rel for r in reports])
        assert _non_decreasing([r.l2_rel for r in reports])

    def test_planar_transport(self):
        """Test pure transport reverses the chain with the consistent run best."""
        reports = self._reports("table6")
        l2 = [r.l2_rel for r in reports]
        assert _decreasing(l2)
        assert reports[-1].scheme == "G"
        assert l2[-1] == min(l2)

    def test_spatial_transport(self):
        """Test the consistent run is the most accurate for spatial transport."""
        reports = self._reports("table9")
        assert [r.scheme for r in reports] == ["1", "2", "3", "G"]
        l2 = [r.l2_rel for r in reports]
        assert _decreasing(l2)
        assert l2[-1] == min(l2)

    @pytest.mark.slow
    @pytest.mark.parametrize("preset_name", ["table7", "table8"])
    @pytest.mark.parametrize("mesh_index", [0, 1])
    def test_spatial_diffusive(self, preset_name, mesh_index):
        """Test the non-decreasing chain on structured and perturbed spatial meshes."""
        reports = self._reports(preset_name, mesh_index)
        assert [r.scheme for r in reports] == ["1", "2", "3", "4", "G"]
        assert _non_decreasing([r.inf_rel for r in reports])

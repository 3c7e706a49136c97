"""Tests for data models."""

import math

import pytest
from pydantic import ValidationError

from masslump_py.exceptions.errors import DomainError
from masslump_py.exceptions.errors import ValidationError as LibraryValidationError
from masslump_py.models.config import (
    ConvergenceConfig,
    CurvesConfig,
    FemRunConfig,
    OutputFormat,
    build_run_config,
    parse_config_text,
)
from masslump_py.models.params import SchemeParams, SymbolValue
from masslump_py.models.reports import (
    ConvergenceMode,
    ConvergenceRow,
    ConvergenceTable,
    ErrorReport,
    PairGap,
)
from masslump_py.models.schemes import SchemeKind, SchemeSelector


class TestSchemeParams:
    """Test scheme parameter records."""

    def test_lambda_alias(self):
        """Test the convection speed is accepted as ``lambda``."""
        params = SchemeParams.model_validate({"lambda": 1.0, "kappa": 0.01, "h": 0.02, "p": 3 * math.pi})
        assert params.lam == 1.0

    def test_derived_quantities(self):
        """Test z, mu and the Peclet number."""
        params = SchemeParams(lam=1.0, kappa=0.01, h=0.02, p=3 * math.pi)
        assert params.z == pytest.approx(0.06 * math.pi)
        assert params.mu == pytest.approx(100.0 / (3 * math.pi))
        assert params.pe == pytest.approx(100.0)
        assert not params.is_pure_transport

    def test_mu_undefined_without_diffusion(self):
        """Test mu raises for pure transport."""
        params = SchemeParams(lam=1.0, kappa=0.0, h=0.1, p=1.0)
        assert params.is_pure_transport
        with pytest.raises(DomainError):
            _ = params.mu

    @pytest.mark.parametrize(
        "values",
        [
            {"lam": 1.0, "kappa": -0.1, "h": 0.1, "p": 1.0},
            {"lam": 1.0, "kappa": 0.1, "h": 0.0, "p": 1.0},
            {"lam": 0.0, "kappa": 0.0, "h": 0.1, "p": 1.0},
        ],
    )
    def test_invalid(self, values):
        """Test invalid parameter sets are rejected."""
        with pytest.raises(ValidationError):
            SchemeParams(**values)

    def test_with_h(self):
        """Test copying with a new mesh size."""
        params = SchemeParams(lam=1.0, kappa=0.01, h=0.02, p=1.0).with_h(0.01)
        assert params.h == 0.01
        assert params.kappa == 0.01


class TestSymbolValue:
    """Test the complex symbol record."""

    def test_complex_round_trip(self):
        """Test conversion to and from complex numbers."""
        value = SymbolValue.from_complex(complex(-2.0, 3.0))
        assert value.to_complex() == complex(-2.0, 3.0)
        assert value.magnitude == pytest.approx(math.sqrt(13.0))

    def test_subtraction(self):
        """Test symbol differences."""
        diff = SymbolValue(re=1.0, im=2.0) - SymbolValue(re=0.5, im=-1.0)
        assert (diff.re, diff.im) == (0.5, 3.0)


class TestSchemeSelector:
    """Test scheme selection."""

    def test_zero_corrections_is_lumped(self):
        """Test Corrected(0) normalizes to Lumped."""
        selector = SchemeSelector.corrected(0)
        assert selector.kind is SchemeKind.LUMPED
        assert selector == SchemeSelector.lumped()

    def test_consistent_drops_n(self):
        """Test the consistent kind ignores n."""
        assert SchemeSelector(kind=SchemeKind.CONSISTENT, n=3).n == 0

    @pytest.mark.parametrize(
        "token, label",
        [("L", "L"), ("lumped", "L"), ("G", "G"), ("galerkin", "G"), ("3", "3"), ("0", "L")],
    )
    def test_parse(self, token, label):
        """Test label parsing."""
        assert SchemeSelector.parse(token).label == label

    def test_parse_unknown(self):
        """Test unknown labels raise."""
        with pytest.raises(ValueError, match="Unknown scheme label"):
            SchemeSelector.parse("X")

    def test_hashable(self):
        """Test selectors can key dictionaries."""
        assert len({SchemeSelector.corrected(2), SchemeSelector.corrected(2)}) == 1


class TestReports:
    """Test report models."""

    def _table(self):
        rows = []
        for n, h, gap, order in ((11, 0.1, 4e-4, None), (21, 0.05, 1e-4, 2.0)):
            errors = {
                s: ErrorReport(scheme=s, inf_abs=e, inf_rel=e, l2_rel=e)
                for s, e in (("1", 0.02 * h), ("2", 0.01 * h))
            }
            pair = PairGap(first="1", second="2", gap=gap, rel_difference=0.01 * h, order=order)
            rows.append(ConvergenceRow(n_nodes=n, h=h, errors=errors, pairs=[pair]))
        return ConvergenceTable(
            example="demo",
            mode=ConvergenceMode.SYMBOL_EXACT,
            t=0.1,
            schemes=["1", "2"],
            pair_keys=["1,2"],
            rows=rows,
        )

    def test_table_accessors(self):
        """Test column helpers of a convergence table."""
        table = self._table()
        assert table.n_values == [11, 21]
        assert table.rel_errors("2") == pytest.approx([1e-3, 5e-4])
        assert table.orders("1,2") == [None, 2.0]
        assert table.difference_rows()["1,2"] == pytest.approx([1e-3, 5e-4])

    def test_missing_pair(self):
        """Test looking up an absent pair."""
        with pytest.raises(KeyError):
            self._table().rows[0].pair("G,1")

    def test_negative_norm_rejected(self):
        """Test norms must be non-negative."""
        with pytest.raises(ValidationError):
            ErrorReport(inf_abs=-1.0, inf_rel=0.0, l2_rel=0.0)


class TestConfig:
    """Test command configuration."""

    def test_parse_config_text(self):
        """Test comments, blanks and key spellings."""
        values = parse_config_text("# Example 1\n\nlambda = 1\nt-end=0.5\n--mesh-file = a.msh\n")
        assert values == {"lambda": "1", "t_end": "0.5", "mesh_file": "a.msh"}

    def test_parse_config_text_bad_line(self):
        """Test a line without '=' is rejected."""
        with pytest.raises(LibraryValidationError, match="line 2"):
            parse_config_text("kappa=1\nkappa\n")

    def test_flags_override_file(self):
        """Test explicit flags win over file values."""
        config = build_run_config(
            "symbols",
            {"lambda": "1", "kappa": "0.5", "h": "0.02", "p": "3", "format": "markdown"},
            {"kappa": 0.01},
        )
        assert config.params.kappa == 0.01
        assert config.format is OutputFormat.MARKDOWN
        assert config.out == "-"

    def test_convergence_lists(self):
        """Test comma-separated lists are split."""
        config = ConvergenceConfig(example="example1", ns="501,601", schemes="L,1,G")
        assert config.ns == [501, 601]
        assert config.schemes == ["L", "1", "G"]
        assert config.mode is ConvergenceMode.SYMBOL_EXACT

    def test_convergence_needs_one_source(self):
        """Test example and preset are exclusive."""
        with pytest.raises(ValidationError):
            ConvergenceConfig(example="example1", preset="table2", ns="501")

    def test_convergence_increasing_ns(self):
        """Test node counts must increase."""
        with pytest.raises(ValidationError, match="strictly increasing"):
            ConvergenceConfig(example="example1", ns="601,501")

    def test_curves_modes(self):
        """Test the curve modes and the sweep range."""
        config = CurvesConfig(fig4=True, mu_range="0:20:200")
        assert config.mu_range == (0.0, 20.0, 200)
        with pytest.raises(ValidationError):
            CurvesConfig(mu=1.0, pure=True)
        with pytest.raises(ValidationError):
            CurvesConfig(mu=1.0, samples=1)

    def test_femrun_sources(self):
        """Test femrun needs exactly one mesh source."""
        config = FemRunConfig(example="example3", mesh="structured:15,25", corrections="1,2")
        assert config.corrections == [1, 2]
        assert config.consistent
        with pytest.raises(ValidationError):
            FemRunConfig(example="example3")
        with pytest.raises(ValidationError):
            FemRunConfig(example="example3", mesh="structured:3,3", mesh_file="m.txt")

    def test_roots_needs_diffusion(self):
        """Test the roots command rejects kappa = 0."""
        with pytest.raises(LibraryValidationError):
            build_run_config("roots", {}, {"lambda": 1.0, "kappa": 0.0, "p": 1.0})

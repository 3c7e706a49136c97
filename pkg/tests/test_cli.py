"""Tests for the masslump command-line tool and its output helpers."""

import csv
import io
import math
from unittest.mock import patch

import numpy as np
import pytest

from masslump_py.cli import output
from masslump_py.cli.main import build_parser, main
from masslump_py.experiments.presets import PRESETS, get_example
from masslump_py.experiments.runners import run_convergence_1d
from masslump_py.fem.mesh import save_mesh, structured_simplicial
from masslump_py.models.reports import ErrorReport
from masslump_py.models.schemes import SchemeSelector

THREE_PI = repr(3 * math.pi)


def _key_values(text):
    return dict(line.split("=", 1) for line in text.splitlines())


def _csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestParser:
    """Test argument parsing."""

    def test_only_given_flags_are_set(self):
        """Test defaults are left to the configuration models."""
        args = vars(build_parser().parse_args(["roots", "--lambda", "1", "--kappa", "0.01", "--p", "2"]))
        assert args == {"command": "roots", "lambda": 1.0, "kappa": 0.01, "p": 2.0}

    def test_missing_command(self):
        """Test a missing subcommand is a usage error."""
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == 2

    def test_bad_flag_value(self):
        """Test a non-numeric float flag is a usage error."""
        with pytest.raises(SystemExit) as exc_info:
            main(["symbols", "--h", "abc"])
        assert exc_info.value.code == 2


class TestSymbolsCommand:
    """Test the symbols command."""

    def test_errors_of_example_one(self, capsys):
        """Test the relative harmonic errors at N = 501."""
        status = main(
            ["symbols", "--lambda", "1", "--kappa", "0.01", "--h", "0.02", "--p", THREE_PI, "--n", "2", "--t", "0.1"]
        )
        assert status == 0
        values = _key_values(capsys.readouterr().out)
        assert list(values) == [
            "omega_exact",
            "omega_L",
            "omega_1",
            "omega_2",
            "omega_G",
            "rel_err_L",
            "rel_err_1",
            "rel_err_2",
            "rel_err_G",
        ]
        assert float(values["rel_err_1"]) == pytest.approx(2.6315e-4, rel=1e-3)
        assert float(values["rel_err_L"]) == pytest.approx(5.5781e-3, rel=1e-3)
        assert complex(values["omega_exact"]) == pytest.approx(complex(-0.01 * 9 * math.pi**2, -3 * math.pi), rel=1e-4)

    def test_without_time(self, capsys):
        """Test only symbols are printed when no time is given."""
        assert main(["symbols", "--lambda", "1", "--kappa", "0", "--h", "0.1", "--p", "1"]) == 0
        assert "rel_err_L" not in capsys.readouterr().out

    def test_invalid_parameters(self, capsys):
        """Test a trivial equation is rejected with status 2."""
        assert main(["symbols", "--lambda", "0", "--kappa", "0", "--h", "0.1", "--p", "1"]) == 2
        assert capsys.readouterr().err.startswith("masslump: error: Invalid symbols parameters")


class TestRootsCommand:
    """Test the roots command."""

    def test_node_thresholds(self, capsys):
        """Test node counts from which each pair gap is positive."""
        status = main(["roots", "--lambda", "1", "--kappa", "0.01", "--p", THREE_PI, "--length", "10"])
        assert status == 0
        values = _key_values(capsys.readouterr().out)
        assert values["nodes_f_1"] == "485"
        assert values["nodes_f_2"] == "266"
        assert values["nodes_g_1"] == "484"
        assert values["nodes_g_2"] == "266"
        assert values["nodes_g_3"] == "260"
        assert float(values["mu"]) == pytest.approx(10.610, rel=1e-3)
        assert float(values["z0"]) == pytest.approx(0.1948, abs=1e-4)

    def test_zero_wave_number(self):
        """Test p = 0 is invalid."""
        assert main(["roots", "--lambda", "1", "--kappa", "0.01", "--p", "0"]) == 2


class TestCurvesCommand:
    """Test the curves command."""

    def test_gap_samples(self, capsys, tmp_path):
        """Test sampled columns and the optional SVG."""
        svg = tmp_path / "curves.svg"
        status = main(["curves", "--mu", "5", "--nmax", "2", "--samples", "11", "--svg", str(svg)])
        assert status == 0
        rows = _csv_rows(capsys.readouterr().out)
        assert len(rows) == 11
        assert list(rows[0]) == ["z", "f_1", "f_2", "g_1", "g_2"]
        assert float(rows[-1]["z"]) == pytest.approx(math.pi)
        assert svg.read_text().startswith("<svg")
        assert svg.read_text().count("<polyline") == 4

    def test_z0_sweep(self, capsys):
        """Test the z0 curve in Markdown."""
        assert main(["curves", "--fig4", "--mu-range", "1:10:4", "--format", "markdown"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "| mu | z0 |"
        assert len(lines) == 6

    def test_conflicting_modes(self):
        """Test exactly one mode must be chosen."""
        assert main(["curves", "--mu", "5", "--pure"]) == 2


class TestConvergenceCommand:
    """Test the convergence command."""

    def test_csv(self, capsys):
        """Test the CSV columns of a small sweep."""
        status = main(["convergence", "--example", "example1", "--ns", "501,601", "--schemes", "1,2"])
        assert status == 0
        rows = _csv_rows(capsys.readouterr().out)
        assert [row["n_nodes"] for row in rows] == ["501", "601"]
        assert rows[0]["order_2_1"] == ""
        assert float(rows[0]["inf_rel_1"]) == pytest.approx(2.6315e-4, rel=1e-3)
        assert math.isfinite(float(rows[1]["order_2_1"]))

    def test_preset_markdown_with_jobs(self, capsys):
        """Test a preset rendered as a Markdown table by the async runner."""
        table = run_convergence_1d(get_example("example1"), [501, 601])
        with patch("masslump_py.cli.main.get_preset") as mock_preset:
            mock_preset.return_value = PRESETS["table2"].model_copy(
                update={"ns": (501, 601)}
            )
            status = main(["convergence", "--preset", "table2", "--jobs", "2", "--format", "markdown"])
        assert status == 0
        text = capsys.readouterr().out
        assert text == output.convergence_markdown(table)

    def test_fem_preset_rejected(self, capsys):
        """Test a FEM preset is refused."""
        assert main(["convergence", "--preset", "table5"]) == 2
        assert "use femrun" in capsys.readouterr().err

    def test_example_and_preset(self):
        """Test the two sources are mutually exclusive."""
        assert main(["convergence", "--example", "example1", "--preset", "table1"]) == 2


class TestFemRunCommand:
    """Test the femrun command."""

    def test_mesh_recipe(self, capsys):
        """Test a short run on a generated mesh."""
        status = main(
            ["femrun", "--example", "example3", "--mesh", "structured:6,6", "--corrections", "1,2", "--lumped", "--t-end", "0.01"]
        )
        assert status == 0
        rows = _csv_rows(capsys.readouterr().out)
        assert [row["scheme"] for row in rows] == ["L", "1", "2", "G"]
        assert {row["mesh"] for row in rows} == {"structured:6,6"}
        assert all(float(row["inf_rel"]) < 0.1 for row in rows)

    def test_mesh_file(self, capsys, tmp_path):
        """Test a run on a saved mesh, written to a file."""
        mesh_path = tmp_path / "mesh.txt"
        save_mesh(structured_simplicial(2, (5, 5)), mesh_path)
        out = tmp_path / "report.csv"
        status = main(
            ["femrun", "--example", "example4", "--mesh-file", str(mesh_path), "--no-consistent", "--t-end", "0", "--out", str(out)]
        )
        assert status == 0
        assert capsys.readouterr().out == ""
        rows = _csv_rows(out.read_text())
        assert [row["scheme"] for row in rows] == ["1", "2", "3", "4"]
        assert all(float(row["inf_abs"]) == pytest.approx(0.0, abs=1e-12) for row in rows)

    def test_preset_uses_seed(self, capsys):
        """Test the preset meshes and a seed override reach the runner."""
        reports = [ErrorReport(scheme=label, inf_abs=0.1, inf_rel=0.01, l2_rel=0.001) for label in ("1", "2", "3", "G")]
        with patch("masslump_py.cli.main.run_fem", return_value=reports) as mock_run:
            status = main(["femrun", "--preset", "table9", "--seed", "7", "--format", "markdown"])
        assert status == 0
        assert mock_run.call_count == 4
        meshes = [call.args[1] for call in mock_run.call_args_list]
        assert meshes[0].n_nodes == 11 * 13 * 15
        assert mock_run.call_args_list[0].args[2] == [SchemeSelector.parse(s) for s in ("1", "2", "3", "G")]
        text = capsys.readouterr().out
        assert "perturbed:11,13,15:0.3:7" in text
        assert "| err_G 2,dis |" in text

    def test_missing_mesh_file(self, capsys, tmp_path):
        """Test an unreadable mesh file exits with the I/O status."""
        status = main(["femrun", "--example", "example3", "--mesh-file", str(tmp_path / "missing.txt")])
        assert status == 4
        assert capsys.readouterr().err.startswith("masslump: error:")

    def test_dimension_mismatch(self, capsys):
        """Test a planar example on a spatial mesh is a domain error."""
        assert main(["femrun", "--example", "example3", "--mesh", "structured:3,3,3", "--t-end", "0"]) == 2


class TestConfigFile:
    """Test --config handling."""

    def test_flags_override_file(self, capsys, tmp_path):
        """Test file values are read and flags win."""
        config = tmp_path / "run.conf"
        config.write_text("# harmonic\nlambda=1\nkappa=0.01\np=1\nlength=5\n")
        assert main(["roots", "--config", str(config), "--p", THREE_PI]) == 0
        values = _key_values(capsys.readouterr().out)
        assert int(values["nodes_f_1"]) < 485

    def test_missing_file(self, capsys, tmp_path):
        """Test a missing config file exits with the I/O status."""
        assert main(["pe", "--config", str(tmp_path / "none.conf")]) == 4

    def test_malformed_file(self, tmp_path):
        """Test a line without '=' is a validation error."""
        config = tmp_path / "bad.conf"
        config.write_text("p 2\n")
        assert main(["pe", "--config", str(config)]) == 2


class TestPeCommand:
    """Test the pe command."""

    def test_rows(self, capsys):
        """Test one CSV row per Peclet number."""
        assert main(["pe", "--p", "2", "--pe", "10,100"]) == 0
        rows = _csv_rows(capsys.readouterr().out)
        assert [float(row["pe"]) for row in rows] == [10.0, 100.0]
        assert list(rows[0]) == ["pe", "z0", "z_tilde", "psi", "z0_scaled", "gap_scaled", "psi_gap_scaled"]


class TestOutputHelpers:
    """Test the renderers."""

    @pytest.mark.parametrize(
        "value, expected",
        [(2.6315e-4, "2.6315e-4"), (123456.0, "1.2346e5"), (-0.5, "-5.0000e-1"), (math.inf, "inf")],
    )
    def test_format_compact(self, value, expected):
        """Test the short exponent form."""
        assert output.format_compact(value) == expected

    def test_key_value_lines(self):
        """Test complex, float and integer values."""
        text = output.key_value_lines([("w", complex(1.0, -2.0)), ("x", 0.5), ("n", 3)])
        assert text == "w=1.0000e0-2.0000e0j\nx=5.0000e-1\nn=3\n"

    def test_write_csv(self):
        """Test full precision floats and empty cells for None."""
        text = output.write_csv(["a", "b"], [{"a": 0.1, "b": None}])
        assert text == "a,b\n0.10000000000000001,\n"

    def test_markdown_table(self):
        """Test the header separator."""
        assert output.markdown_table(["x", "y"], [["1", "2"]]) == "| x | y |\n|---|---|\n| 1 | 2 |\n"

    def test_fem_markdown(self):
        """Test meshes become columns."""
        reports = [ErrorReport(scheme="1", inf_abs=1.0, inf_rel=0.5, l2_rel=0.25)]
        text = output.fem_markdown("example3", 0.5, [("m1", reports), ("m2", reports)])
        assert text.startswith("example3, t=0.5\n\n| Value | m1 | m2 |")
        assert "| err_1 inf,rel | 5.0000e-1 | 5.0000e-1 |" in text

    def test_svg_constant_series(self):
        """Test a flat series still renders."""
        svg = output.svg_polylines({"z": np.linspace(0.0, 1.0, 3), "f": np.zeros(3)})
        assert "<polyline" in svg

    def test_emit_stdout(self, capsys):
        """Test '-' writes to stdout."""
        output.emit("hello\n", "-")
        assert capsys.readouterr().out == "hello\n"

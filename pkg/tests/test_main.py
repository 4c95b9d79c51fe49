"""Tests for the singosc4 command line."""

import json

import pytest

from src.config.settings import settings
from src.main import EXIT_CONVERGENCE, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, main, read_config_file


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSpectrumCommand:
    """Test the spectrum subcommand."""

    def test_csv(self, capsys):
        """Test the schema line, header and free-oscillator energies."""
        code, out, _ = _run(capsys, "spectrum", "--n-max", "2")
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "# schema=singosc4/spectrum version=1"
        assert lines[1] == "N,m,s,delta1,delta2,energy,multiplet_size"
        assert len(lines) == 2 + 1 + 4 + 9
        assert lines[2] == "0,0,0,0.000000000000000e+00,0.000000000000000e+00,2.000000000000000e+00,1"

    def test_single_sector(self, capsys):
        """Test one sector with singular terms."""
        code, out, _ = _run(capsys, "spectrum", "--n-max", "4", "--m", "0", "--s", "0", "--c1", "0.5", "--format", "json")
        document = json.loads(out)
        assert code == EXIT_OK
        rows = document["results"]["spectrum"]
        assert [row["N"] for row in rows] == [0, 2, 4]
        assert [row["multiplet_size"] for row in rows] == [1, 2, 3]
        assert rows[0]["energy"] == pytest.approx(3.0)
        assert document["schema_version"] == "1"

    def test_deterministic(self, capsys):
        """Test identical invocations give byte-identical output."""
        argv = ("spectrum", "--n-max", "3", "--c1", "0.5", "--c2", "2", "--format", "json")
        _, first, _ = _run(capsys, *argv)
        _, second, _ = _run(capsys, *argv)
        assert first == second

    def test_missing_level(self, capsys):
        """Test --n-max is required."""
        code, _, err = _run(capsys, "spectrum")
        assert code == EXIT_USAGE
        assert "--n-max" in err


class TestCoeffsCommand:
    """Test the coeffs subcommand."""

    def test_ground_level_json(self, capsys):
        """Test the N = 0 table and its sector block."""
        code, out, _ = _run(capsys, "coeffs", "--n", "0", "--m", "0", "--s", "0", "--c1", "0.5", "--format", "json")
        document = json.loads(out)
        assert code == EXIT_OK
        results = document["results"]
        assert results["sector"]["m"] == "0"
        assert results["sector"]["M1"] == 0
        assert [row["value"] for row in results["tables"]] == [pytest.approx(1.0), pytest.approx(1.0)]
        assert results["max_deviation"]["3f2-cg"] == pytest.approx(0.0, abs=1e-14)
        assert document["config"]["m"] == "0"

    def test_csv_deviation_lines(self, capsys):
        """Test the deviation comment lines follow the schema line."""
        code, out, _ = _run(capsys, "coeffs", "--n", "3", "--m", "1/2", "--s", "1/2", "--c2", "2.0")
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "# schema=singosc4/coefficients version=1"
        assert lines[1].startswith("# max_deviation 3f2-cg=")
        assert lines[2].startswith("N,m,s,")
        assert len(lines) == 3 + 2 * 4

    def test_invalid_sector(self, capsys):
        """Test m + s must be an integer."""
        code, _, err = _run(capsys, "coeffs", "--n", "2", "--m", "1/2", "--s", "0")
        assert code == EXIT_USAGE
        assert err.startswith("error:")

    def test_float_charge(self, capsys):
        """Test a decimal charge is refused."""
        code, _, _ = _run(capsys, "coeffs", "--n", "2", "--m", "0.5", "--s", "0.5")
        assert code == EXIT_USAGE

    def test_unknown_method(self, capsys):
        """Test an unknown coefficient method is refused."""
        code, _, _ = _run(capsys, "coeffs", "--n", "2", "--m", "0", "--s", "0", "--methods", "cg,magic")
        assert code == EXIT_USAGE

    def test_convergence_failure(self, capsys, monkeypatch):
        """Test a quadrature that cannot converge exits with diagnostics."""
        monkeypatch.setattr(settings, "quad_tolerance", -1.0)
        code, _, err = _run(capsys, "coeffs", "--n", "2", "--m", "0", "--s", "0", "--c1", "0.123", "--methods", "quad")
        assert code == EXIT_CONVERGENCE
        assert "diagnostics:" in err


class TestSpheroidalCommand:
    """Test the spheroidal subcommand."""

    def test_csv(self, capsys):
        """Test one row per R, q, component and index."""
        code, out, _ = _run(capsys, "spheroidal", "--n", "2", "--m", "0", "--s", "0", "--r-list", "0,1")
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "# schema=singosc4/spheroidal version=1"
        assert len(lines) == 2 + 2 * 2 * 4

    def test_json_zero_coupling(self, capsys):
        """Test Q = lambda at R = 0."""
        code, out, _ = _run(capsys, "spheroidal", "--n", "2", "--m", "0", "--s", "0", "--r-list", "0", "--format", "json")
        solution = json.loads(out)["results"]["solutions"][0]
        assert code == EXIT_OK
        assert solution["q_values"] == [0.0, 2.0]
        assert set(solution["residuals"]) == {"oracle_consistent", "printed"}

    def test_negative_coupling(self, capsys):
        """Test R < 0 is refused before any computation."""
        code, _, _ = _run(capsys, "spheroidal", "--n", "2", "--m", "0", "--s", "0", "--r-list", "0,-1")
        assert code == EXIT_USAGE


class TestVerifyCommand:
    """Test the verify subcommand."""

    def test_passing_suite(self, capsys, tmp_path):
        """Test a passing suite exits 0 and writes its report."""
        report = tmp_path / "report.json"
        code, out, _ = _run(capsys, "verify", "--suite", "ks_map", "--report", str(report))
        assert code == EXIT_OK
        assert out.startswith("# schema=singosc4/checks version=1")
        document = json.loads(report.read_text())
        assert document["results"]["passed"] is True
        assert document["checks"][0]["name"] == "ks_identity"

    def test_perturbed_fails(self, capsys):
        """Test a perturbed Clebsch-Gordan table exits 3."""
        code, _, _ = _run(capsys, "verify", "--suite", "cg_identity", "--perturb-cg", "0.01")
        assert code == EXIT_VERIFICATION

    def test_unknown_suite(self, capsys):
        """Test an unknown suite is a usage error."""
        code, _, _ = _run(capsys, "verify", "--suite", "bogus")
        assert code == EXIT_USAGE


class TestLedgerCommand:
    """Test the ledger subcommand."""

    def test_json(self, capsys):
        """Test the ledger lists the constant ratios."""
        code, out, _ = _run(capsys, "ledger", "--n-max", "1", "--format", "json")
        items = {row["item"]: row for row in json.loads(out)["results"]["ledger"]}
        assert code == EXIT_OK
        assert items["radial_constant"]["measured"] == pytest.approx(2.0 * 2.0**0.5, rel=1e-10)
        assert items["spheroidal_potential"]["measured"] == pytest.approx(2.0)


class TestConfigFile:
    """Test config files and their precedence."""

    def test_read(self, tmp_path):
        """Test comments, blank lines and dashed keys."""
        path = tmp_path / "run.cfg"
        path.write_text("# oscillator\n\nn-max = 3\nc1 = 0.5\n")
        assert read_config_file(str(path)) == {"n_max": "3", "c1": "0.5"}

    def test_malformed(self, tmp_path):
        """Test a line without '=' is refused."""
        path = tmp_path / "run.cfg"
        path.write_text("n_max 3\n")
        with pytest.raises(ValueError):
            read_config_file(str(path))

    def test_flags_override(self, capsys, tmp_path):
        """Test command-line flags win over the file."""
        path = tmp_path / "run.cfg"
        path.write_text("n_max = 4\nc1 = 0.5\nformat = json\n")
        code, out, _ = _run(capsys, "spectrum", "--config", str(path), "--n-max", "0", "--m", "0", "--s", "0")
        rows = json.loads(out)["results"]["spectrum"]
        assert code == EXIT_OK
        assert len(rows) == 1
        assert rows[0]["energy"] == pytest.approx(3.0)

    def test_unknown_key(self, capsys, tmp_path):
        """Test an unknown key in the file is a usage error."""
        path = tmp_path / "run.cfg"
        path.write_text("colour = blue\n")
        code, _, _ = _run(capsys, "spectrum", "--config", str(path), "--n-max", "1")
        assert code == EXIT_USAGE

    def test_output_file(self, capsys, tmp_path):
        """Test --output writes the artifact instead of stdout."""
        target = tmp_path / "spectrum.csv"
        code, out, _ = _run(capsys, "spectrum", "--n-max", "1", "--output", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert target.read_text().startswith("# schema=singosc4/spectrum")

"""Tests for the cosetsle command line."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from cli.main import DEFAULT_AUDIT, EXIT_FAILED, EXIT_INVALID, EXIT_OK, EXIT_USAGE, cli
from cosetsle import __version__
from cosetsle.config import SEED_ENV
from cosetsle.manifest import file_digest, manifest_path
from cosetsle.schemas import load_schema, validate_payload

DETERMINISTIC = ["--kappa", "0", "--scheme", "slit", "--dt", "0.001", "--T", "0.1"]


@pytest.fixture
def runner(monkeypatch):
    """CLI runner with no seed override in the environment."""
    monkeypatch.delenv(SEED_ENV, raising=False)
    return CliRunner()


class TestGroup:
    """Tests for the top-level group."""

    def test_version(self, runner):
        """Test --version prints the package version."""
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == EXIT_OK
        assert __version__ in result.output

    def test_unknown_command(self, runner):
        """Test unknown commands are usage errors."""
        assert runner.invoke(cli, ["bogus"]).exit_code == EXIT_USAGE


class TestClassify:
    """Tests for the classify command."""

    def test_default_level(self, runner):
        """Test the default model is su2_u1 at k = 2."""
        result = runner.invoke(cli, ["classify"])
        assert result.exit_code == EXIT_OK
        assert "su2_u1 k=2 c=1/2" in result.output
        assert "(1,3)" in result.output

    def test_json(self, runner):
        """Test --json emits a parseable report."""
        result = runner.invoke(cli, ["classify", "--level", "1", "--json"])
        assert result.exit_code == EXIT_OK
        data = json.loads(result.output)
        assert data["level"] == 1
        assert data["central_charge"] == "0"

    def test_level_zero(self, runner):
        """Test k = 0 is invalid input."""
        result = runner.invoke(cli, ["classify", "--level", "0"])
        assert result.exit_code == EXIT_INVALID
        assert "✗ Error" in result.output

    def test_unknown_model(self, runner):
        """Test unknown models are invalid input."""
        assert runner.invoke(cli, ["classify", "--model", "e8_u1"]).exit_code == EXIT_INVALID

    def test_output_with_manifest(self, runner, tmp_path):
        """Test --output writes the report and its manifest."""
        target = tmp_path / "classes.txt"
        result = runner.invoke(cli, ["classify", "--level", "1", "--output", str(target)])
        assert result.exit_code == EXIT_OK
        assert target.exists()
        manifest = json.loads(manifest_path(target).read_text())
        assert manifest["command"] == "classify"
        assert manifest["config"]["solver"]["level"] == 1

    def test_config_file(self, runner, tmp_path):
        """Test the level falls back to the configuration file."""
        config = tmp_path / "config.yaml"
        config.write_text("solver:\n  level: 1\n")
        result = runner.invoke(cli, ["classify", "--config", str(config)])
        assert result.exit_code == EXIT_OK
        assert "k=1" in result.output

    def test_bad_config_file(self, runner, tmp_path):
        """Test a non-mapping configuration is invalid input."""
        config = tmp_path / "config.yaml"
        config.write_text("- 1\n")
        assert runner.invoke(cli, ["classify", "--config", str(config)]).exit_code == EXIT_INVALID


class TestSolve:
    """Tests for the solve command."""

    def test_selection_rule(self, runner):
        """Test mu - nu odd is rejected."""
        result = runner.invoke(cli, ["solve", "--field", "1,0"])
        assert result.exit_code == EXIT_INVALID
        assert "selection rule" in result.output

    def test_spin_field_closed_form(self, runner):
        """Test (1,1) is inconsistent in both transcriptions."""
        result = runner.invoke(cli, ["solve", "--field", "1,1", "--closed-form"])
        assert result.exit_code == EXIT_OK
        assert "inconsistent" in result.output
        assert "conventions agree" in result.output

    def test_fermion_conventions_differ(self, runner):
        """Test (2,0) depends on the central-term sign."""
        result = runner.invoke(cli, ["solve", "--field", "2,0", "--closed-form"])
        assert "unique kappa=13 tau=-8" in result.output
        assert "unique kappa=15 tau=-9" in result.output
        assert "conventions differ" in result.output

    def test_engine(self, runner):
        """Test the engine rows for (2,0) give (3, 0)."""
        result = runner.invoke(cli, ["solve", "--field", "2,0", "--engine"])
        assert result.exit_code == EXIT_OK
        assert "unique kappa=3 tau=0" in result.output
        assert "full raising closure" in result.output

    def test_unrealizable_uses_orbit_partner(self, runner):
        """Test (0,2) borrows engine rows from (2,0)."""
        result = runner.invoke(cli, ["solve", "--field", "0,2", "--engine"])
        assert result.exit_code == EXIT_OK
        assert "engine rows from (2,0)" in result.output
        assert "unique kappa=3 tau=0" in result.output

    def test_all_representatives(self, runner):
        """Test --representative all solves every orbit member."""
        result = runner.invoke(cli, ["solve", "--field", "0,0", "--closed-form", "--representative", "all"])
        assert result.exit_code == EXIT_OK
        assert "(2,2)" in result.output

    def test_json(self, runner):
        """Test --json lists one entry per source."""
        result = runner.invoke(cli, ["solve", "--field", "0,0", "--json"])
        assert result.exit_code == EXIT_OK
        sources = [entry["source"] for entry in json.loads(result.output)]
        assert sources == ["literal", "sign-corrected", "engine", "closure"]

    def test_exclusive_flags(self, runner):
        """Test --closed-form with --engine is a usage error."""
        result = runner.invoke(cli, ["solve", "--field", "2,0", "--closed-form", "--engine"])
        assert result.exit_code == EXIT_USAGE

    def test_bad_label(self, runner):
        """Test malformed labels are usage errors."""
        assert runner.invoke(cli, ["solve", "--field", "two"]).exit_code == EXIT_USAGE

    def test_missing_field(self, runner):
        """Test --field is required."""
        assert runner.invoke(cli, ["solve"]).exit_code == EXIT_USAGE


class TestAudit:
    """Tests for the audit command."""

    def test_level_two(self, runner, tmp_path):
        """Test the audit names the sign-corrected convention."""
        result = runner.invoke(cli, ["audit", "--output", str(tmp_path / "audit.json")])
        assert result.exit_code == EXIT_OK
        assert "consistent central-term conventions: sign-corrected" in result.output

    def test_json(self, runner, tmp_path):
        """Test --json exposes per-tag agreement."""
        result = runner.invoke(cli, ["audit", "--level", "1", "--json", "--output", str(tmp_path / "audit.json")])
        data = json.loads(result.output)
        assert data["consistent_conventions"] == ["literal", "sign-corrected"]

    def test_default_artifact(self, runner, tmp_path):
        """Test the report lands in audit.json with its manifest by default."""
        with runner.isolated_filesystem(temp_dir=tmp_path) as cwd:
            result = runner.invoke(cli, ["audit"])
            assert result.exit_code == EXIT_OK
            target = Path(cwd) / DEFAULT_AUDIT
            assert f"✓ Wrote {DEFAULT_AUDIT}" in result.output
            report = json.loads(target.read_text())
            assert report["level"] == 2
            manifest = json.loads(manifest_path(target).read_text())
            assert manifest["command"] == "audit"
            assert manifest["artifact_digest"] == file_digest(target)

    def test_json_matches_artifact(self, runner, tmp_path):
        """Test --json prints exactly the written report."""
        target = tmp_path / "levels" / "audit.json"
        target.parent.mkdir()
        result = runner.invoke(cli, ["audit", "--json", "--output", str(target)])
        assert result.exit_code == EXIT_OK
        assert json.loads(result.output) == json.loads(target.read_text())

    def test_invalid_level_writes_nothing(self, runner, tmp_path):
        """Test a rejected level leaves no artifact behind."""
        target = tmp_path / "audit.json"
        result = runner.invoke(cli, ["audit", "--level", "0", "--output", str(target)])
        assert result.exit_code == EXIT_INVALID
        assert not target.exists()


class TestWznw:
    """Tests for the wznw command."""

    def test_vacuum(self, runner):
        """Test the su2 vacuum at k = 2."""
        result = runner.invoke(cli, ["wznw", "--level", "2"])
        assert result.exit_code == EXIT_OK
        assert "unique kappa=6 tau=1/2" in result.output

    def test_default_level(self, runner):
        """Test the level defaults to the configured k = 2."""
        result = runner.invoke(cli, ["wznw"])
        assert result.exit_code == EXIT_OK
        assert "su2 k=2" in result.output
        assert "unique kappa=6 tau=1/2" in result.output

    def test_config_level(self, runner, tmp_path):
        """Test the level falls back to the configuration file."""
        config = tmp_path / "config.yaml"
        config.write_text("solver:\n  level: 1\n")
        result = runner.invoke(cli, ["wznw", "--config", str(config)])
        assert result.exit_code == EXIT_OK
        assert "unique kappa=6 tau=2/3" in result.output

    def test_flag_beats_config(self, runner, tmp_path):
        """Test --level overrides the configured level."""
        config = tmp_path / "config.yaml"
        config.write_text("solver:\n  level: 1\n")
        result = runner.invoke(cli, ["wznw", "--config", str(config), "--level", "2"])
        assert "unique kappa=6 tau=1/2" in result.output

    def test_unknown_algebra(self, runner):
        """Test a missing algebra file is invalid input."""
        result = runner.invoke(cli, ["wznw", "--algebra", "nosuch.yaml", "--level", "2"])
        assert result.exit_code == EXIT_INVALID


class TestSchemaOutputs:
    """Tests that --json outputs and written artifacts match the shipped schemas."""

    @pytest.mark.parametrize("level", [1, 2, 3])
    def test_classify(self, runner, level):
        """Test classify --json validates at several levels."""
        result = runner.invoke(cli, ["classify", "--level", str(level), "--json"])
        assert result.exit_code == EXIT_OK
        validate_payload("classification", json.loads(result.output))

    @pytest.mark.parametrize("label", ["0,0", "2,0", "1,1", "0,2"])
    def test_solve(self, runner, label):
        """Test solve --json validates, including fields that borrow engine rows."""
        result = runner.invoke(cli, ["solve", "--field", label, "--json"])
        assert result.exit_code == EXIT_OK
        validate_payload("solve", json.loads(result.output))

    @pytest.mark.parametrize("level", [1, 2])
    def test_audit(self, runner, tmp_path, level):
        """Test audit --json and its written report validate."""
        target = tmp_path / "audit.json"
        result = runner.invoke(cli, ["audit", "--level", str(level), "--json", "--output", str(target)])
        assert result.exit_code == EXIT_OK
        validate_payload("audit", json.loads(result.output))
        validate_payload("audit", json.loads(target.read_text()))
        validate_payload("run_manifest", json.loads(manifest_path(target).read_text()))

    def test_martingale_report(self, runner, tmp_path):
        """Test the martingale report and its manifest validate."""
        target = tmp_path / "report.json"
        args = ["sim", "martingale", *DETERMINISTIC, "--samples", "128", "--h", "0.7", "--p", "0.7", "--out", str(target)]
        assert runner.invoke(cli, args).exit_code == EXIT_OK
        validate_payload("martingale_report", json.loads(target.read_text()))
        validate_payload("run_manifest", json.loads(manifest_path(target).read_text()))

    def test_trace_manifest(self, runner, tmp_path):
        """Test a trace manifest carrying a config input validates."""
        config = tmp_path / "config.yaml"
        config.write_text("sim:\n  kappa: 2.0\n")
        target = tmp_path / "trace.csv"
        args = ["sim", "trace", "--dt", "0.01", "--T", "0.05", "--config", str(config), "--out", str(target)]
        assert runner.invoke(cli, args).exit_code == EXIT_OK
        manifest = json.loads(manifest_path(target).read_text())
        validate_payload("run_manifest", manifest)
        assert manifest["inputs"] == {str(config): file_digest(config)}

    def test_schema_command(self, runner, tmp_path):
        """Test the schema command prints and writes the shipped documents."""
        result = runner.invoke(cli, ["schema", "audit"])
        assert result.exit_code == EXIT_OK
        assert json.loads(result.output) == load_schema("audit")
        target = tmp_path / "manifest.schema.json"
        assert runner.invoke(cli, ["schema", "run_manifest", "--output", str(target)]).exit_code == EXIT_OK
        assert json.loads(target.read_text())["title"] == "RunManifest"

    def test_schema_command_unknown(self, runner):
        """Test an unknown schema name is a usage error."""
        assert runner.invoke(cli, ["schema", "trace"]).exit_code == EXIT_USAGE


class TestSim:
    """Tests for the sim subcommands."""

    def test_trace(self, runner, tmp_path):
        """Test the trace CSV and its manifest."""
        target = tmp_path / "trace.csv"
        result = runner.invoke(
            cli, ["sim", "trace", "--kappa", "2", "--dt", "0.001", "--T", "0.05", "--out", str(target)]
        )
        assert result.exit_code == EXIT_OK
        lines = target.read_text().splitlines()
        assert lines[0] == "t,re,im"
        assert len(lines) == 52
        manifest = json.loads(manifest_path(target).read_text())
        assert manifest["command"] == "sim trace"
        assert manifest["seed"] == 42
        assert manifest["config"]["sim"]["kappa"] == 2.0

    def test_trace_seed_env(self, runner, tmp_path, monkeypatch):
        """Test the environment seed reaches the manifest."""
        monkeypatch.setenv(SEED_ENV, "7")
        target = tmp_path / "trace.csv"
        runner.invoke(cli, ["sim", "trace", "--dt", "0.01", "--T", "0.05", "--out", str(target)])
        assert json.loads(manifest_path(target).read_text())["seed"] == 7

    def test_trace_recovery(self, runner):
        """Test --check-recovery reports the unzipping error."""
        result = runner.invoke(cli, ["sim", "trace", "--dt", "0.001", "--T", "0.05", "--check-recovery"])
        assert result.exit_code == EXIT_OK
        assert "driving recovery sup-error" in result.output

    def test_invalid_config(self, runner):
        """Test dt > T is invalid input."""
        result = runner.invoke(cli, ["sim", "trace", "--dt", "1", "--T", "0.5"])
        assert result.exit_code == EXIT_INVALID

    def test_bad_flag_type(self, runner):
        """Test a non-numeric kappa is a usage error."""
        assert runner.invoke(cli, ["sim", "trace", "--kappa", "abc"]).exit_code == EXIT_USAGE

    def test_martingale_wrong_exponent(self, runner):
        """Test a p off the indicial relation is invalid input."""
        result = runner.invoke(cli, ["sim", "martingale", "--kappa", "4", "--h", "0.5", "--p", "0.6666666667"])
        assert result.exit_code == EXIT_INVALID
        assert "indicial" in result.output

    def test_martingale_pass(self, runner, tmp_path):
        """Test a driftless run passes and writes its report."""
        target = tmp_path / "report.json"
        args = ["sim", "martingale", *DETERMINISTIC, "--samples", "128", "--h", "0.7", "--p", "0.7", "--out", str(target)]
        result = runner.invoke(cli, args)
        assert result.exit_code == EXIT_OK
        assert "✓ Martingale test passed" in result.output
        report = json.loads(target.read_text())
        assert report["verdict"] == "pass"
        assert manifest_path(target).exists()

    def test_martingale_insufficient(self, runner):
        """Test too few samples fail the run."""
        args = ["sim", "martingale", *DETERMINISTIC, "--samples", "10", "--h", "0.7", "--p", "0.7"]
        result = runner.invoke(cli, args)
        assert result.exit_code == EXIT_FAILED
        assert "insufficient samples" in result.output

    def test_coset_martingale_inconsistent(self, runner):
        """Test (2,2) has no solver point to simulate."""
        result = runner.invoke(cli, ["sim", "coset-martingale", "--field", "2,2", "--samples", "10"])
        assert result.exit_code == EXIT_INVALID
        assert "inconsistent" in result.output

    def test_generator_check_static(self, runner):
        """Test tau = 0 leaves the walk at v0."""
        args = ["sim", "generator-check", "--tau", "0", "--dt", "0.01", "--T", "0.1", "--samples", "20"]
        result = runner.invoke(cli, args)
        assert result.exit_code == EXIT_OK
        assert "✓ Generator check passed" in result.output

    @pytest.mark.slow
    def test_generator_check(self, runner, tmp_path):
        """Test the default group walk matches its generator."""
        target = tmp_path / "walk.json"
        args = ["sim", "generator-check", "--dt", "0.01", "--T", "0.5", "--samples", "4000", "--out", str(target)]
        result = runner.invoke(cli, args)
        assert result.exit_code == EXIT_OK
        assert json.loads(target.read_text())["relative_error"] < 0.05

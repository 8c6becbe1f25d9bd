"""Tests for the dynlab command line."""

import json

import pytest
from click.testing import CliRunner

from src.cli.main import cli


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("system:\n  log_file: null\n  progress: false\n")
    return path


def invoke(*args):
    return CliRunner().invoke(cli, [str(a) for a in args], obj={})


class TestCli:
    """Tests for commands, options and exit codes."""

    def test_help_lists_commands(self):
        result = invoke("--help")
        assert result.exit_code == 0
        for name in ("cf", "siegel", "area", "e1", "e1b", "e2", "e3", "e4", "e5", "e6", "e7"):
            assert name in result.output

    def test_cf(self, config_file, tmp_path):
        out = tmp_path / "cf"
        result = invoke("--config", config_file, "--out", out, "cf", "--value", "3/7")
        assert result.exit_code == 0, result.output
        assert "approximation" in result.output
        assert (out / "report.csv").exists()
        meta = json.loads((out / "metadata.json").read_text())
        assert meta["experiment"] == "cf"
        assert meta["config"]["value"] == "3/7"

    def test_cf_value_out_of_range(self, config_file, tmp_path):
        result = invoke("--config", config_file, "--out", tmp_path, "cf", "--value", "1.5")
        assert result.exit_code == 2

    def test_cf_unparsable_value(self, config_file, tmp_path):
        result = invoke("--config", config_file, "--out", tmp_path, "cf", "--value", "abc")
        assert result.exit_code == 2

    def test_area_square(self, config_file, tmp_path):
        result = invoke(
            "--config", config_file, "--out", tmp_path, "area",
            "--family", "square", "--resolution", 64, "--horizon", 50,
        )
        assert result.exit_code == 0, result.output
        assert (tmp_path / "fields" / "area_square.gf01").exists()

    def test_seed_is_recorded(self, config_file, tmp_path):
        result = invoke("--config", config_file, "--out", tmp_path, "--seed", 7, "cf")
        assert result.exit_code == 0
        assert json.loads((tmp_path / "metadata.json").read_text())["seed"] == 7

    def test_missing_config(self, tmp_path):
        result = invoke("--config", tmp_path / "nope.yaml", "cf")
        assert result.exit_code == 2

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("system:\n  log_file: null\ne1:\n  r: 1.5\n")
        result = invoke("--config", path, "e1")
        assert result.exit_code == 2
        assert "e1.r" in result.output

    def test_unknown_threshold(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("system:\n  log_file: null\nthresholds:\n  dens_maximum: 0.5\n")
        assert invoke("--config", path, "cf").exit_code == 2

    def test_invalid_schedule(self, tmp_path):
        path = tmp_path / "chain.yaml"
        path.write_text(
            "system:\n  log_file: null\n  progress: false\n"
            "e7:\n  m_sequence: [3, 2, 4]\n  a_sequence: [40, 400, 4000]\n  epsilons: [0.1, 0.1, 0.1]\n"
        )
        result = invoke("--config", path, "--out", tmp_path / "e7", "e7")
        assert result.exit_code == 2
        assert "InvalidScheduleError" in result.output

    def test_numerical_failure_exits_3(self, tmp_path):
        path = tmp_path / "small.yaml"
        path.write_text(
            "system:\n  log_file: null\n  progress: false\n"
            "area:\n  grid:\n    bbox: [-0.5, -0.5, 0.5, 0.5]\n    resolution: 32\n"
        )
        result = invoke("--config", path, "--out", tmp_path / "area", "area", "--family", "square")
        assert result.exit_code == 3
        assert (tmp_path / "area" / "metadata.json").exists()

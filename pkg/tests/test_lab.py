"""Tests for reports, the worker pool, output bundles and the experiment runner."""

import hashlib
import json
import math

import pytest

from src.core.config import LabConfig, MapSpec
from src.core.dynlab import DynLab
from src.core.errors import InvalidConfigError, InvalidScheduleError, NoConvergenceError
from src.lab.artifacts import OutputBundle
from src.lab.context import RunContext, build_map
from src.lab.pool import TaskStatus, run_tasks
from src.lab.report import CheckResult, CheckStatus, ExperimentReport, check_at_least, check_below
from src.lab.runner import RUNNERS, output_root, run_experiment
from src.maps import Family


@pytest.fixture
def config():
    cfg = LabConfig()
    cfg.system.log_file = None
    cfg.system.progress = False
    return cfg


def make_report(*statuses: CheckStatus) -> ExperimentReport:
    report = ExperimentReport("cf", "abc", ["x"])
    for i, status in enumerate(statuses):
        report.add_check(CheckResult(f"c{i}", status, ""))
    return report


class TestReport:
    """Tests for report rows, checks and exit codes."""

    def test_exit_codes(self):
        assert make_report().exit_code == 0
        assert make_report(CheckStatus.PASS, CheckStatus.INFO).exit_code == 0
        assert make_report(CheckStatus.PASS, CheckStatus.FAIL).exit_code == 1
        assert make_report(CheckStatus.FAIL, CheckStatus.ERROR).exit_code == 3
        assert not make_report(CheckStatus.FAIL).overall_pass
        assert make_report(CheckStatus.INFO).overall_pass

    def test_unknown_column(self):
        with pytest.raises(KeyError):
            ExperimentReport("cf", "abc", ["x"]).add_row("a", y=1)

    def test_csv_cells(self):
        report = ExperimentReport("cf", "abc", ["x", "z", "values"])
        report.add_row("a", x=0.1, z=1 - 2j, values=[1, 2])
        report.add_row("b", error="NoConvergenceError: stuck", x=None)
        body = report.to_csv()
        lines = body.split("\n")
        assert lines[0] == "experiment,config_hash,item,x,z,values,error"
        assert lines[1].startswith("cf,abc,a,0.10000000000000001,1-2j,")
        assert '"[1, 2]"' in lines[1]
        assert lines[2].endswith("NoConvergenceError: stuck")
        assert "\r" not in body
        assert body == report.to_csv()

    def test_checks_csv(self):
        report = make_report(CheckStatus.PASS)
        header = report.checks_csv().split("\n")[0]
        assert header == "experiment,config_hash,check,status,measured,threshold,message"

    def test_check_helpers(self):
        assert check_at_least("d", 0.6, 0.5, "dens").status == CheckStatus.PASS
        assert check_at_least("d", 0.4, 0.5, "dens").status == CheckStatus.FAIL
        assert check_at_least("d", math.nan, 0.5, "dens").status == CheckStatus.ERROR
        assert check_below("r", 1e-4, 1e-3, "abel").status == CheckStatus.PASS
        assert check_below("r", 1e-3, 1e-3, "abel").status == CheckStatus.FAIL
        assert check_below("r", None, 1e-3, "abel").status == CheckStatus.ERROR


class TestPool:
    """Tests for the ordered worker pool."""

    @pytest.mark.parametrize("workers", [1, 3])
    def test_order_and_failures(self, workers):
        def fail():
            raise NoConvergenceError("stuck")

        tasks = [("a", lambda: 1), ("b", fail), ("c", lambda: 3), ("d", lambda: int("x"))]
        results = run_tasks(tasks, max_workers=workers, progress=False)
        assert [r.task_id for r in results] == ["a", "b", "c", "d"]
        assert [r.status for r in results] == [
            TaskStatus.SUCCESS, TaskStatus.FAILURE, TaskStatus.SUCCESS, TaskStatus.FAILURE,
        ]
        assert results[1].error_type == "NoConvergenceError"
        assert results[2].result == 3

    @pytest.mark.parametrize("workers", [1, 2])
    def test_unexpected_exception_is_recorded(self, workers):
        tasks = [("zero", lambda: 1 / 0), ("key", lambda: {}["missing"]), ("ok", lambda: "done")]
        results = run_tasks(tasks, max_workers=workers, progress=False)
        assert [r.error_type for r in results] == ["ZeroDivisionError", "KeyError", None]
        assert results[0].status == TaskStatus.FAILURE
        assert "division by zero" in results[0].error
        assert results[2].ok and results[2].result == "done"



class TestBundle:
    """Tests for the output bundle."""

    def test_checksum_and_structure(self, tmp_path):
        bundle = OutputBundle(tmp_path / "run")
        report = make_report(CheckStatus.PASS)
        report.add_row("a", x=1.5)
        report.thresholds = {"abel_median": 1e-3}
        bundle.write_report(report)
        bundle.write_metadata(report, {"seed": 0})

        meta = json.loads((tmp_path / "run" / "metadata.json").read_text())
        digest = hashlib.sha256((tmp_path / "run" / "report.csv").read_bytes()).hexdigest()
        assert meta["checksum"] == digest
        assert meta["exit_code"] == 0
        assert meta["thresholds"] == {"abel_median": 1e-3}
        assert "numpy" in meta["versions"]
        assert meta["files"] == ["checks.csv", "report.csv"]
        assert bundle.validate_structure() == []

    def test_missing_metadata(self, tmp_path):
        bundle = OutputBundle(tmp_path)
        assert "Missing required file: metadata.json" in bundle.validate_structure()


class TestContext:
    def test_new_report_thresholds(self, config):
        ctx = RunContext(config, "e2")
        report = ctx.new_report(["n"], ["area_ratio_min"])
        assert report.experiment == "E2_area_persistence"
        assert report.thresholds == {"area_ratio_min": 0.8}
        assert report.config_hash == config.config_hash("e2")

    def test_build_map(self):
        fmap = build_map(MapSpec(family="perturbed_quad", epsilon=0.01, degree=4))
        assert fmap.family == Family.PERTURBED_QUAD
        assert fmap.coeffs[4] == 0.01
        assert build_map(MapSpec(family="square")).family == Family.SQUARE


class TestRunner:
    """Tests for running tools and experiments into a bundle."""

    def test_registry(self):
        assert set(RUNNERS) == {"e1", "e1b", "e2", "e3", "e4", "e5", "e6", "e7", "cf", "siegel", "area"}

    def test_output_root(self, config):
        assert output_root(config, "e6").as_posix().endswith("runs/e6")
        config.e6.output_dir = "/tmp/elsewhere"
        assert output_root(config, "e6").as_posix() == "/tmp/elsewhere"

    def test_cf_rational(self, config, tmp_path):
        config.cf.value = "3/7"
        report = run_experiment(config, "cf", tmp_path, progress=False)
        assert report.metadata["digits"] == [0, 2, 3]
        assert [row["q_n"] for row in report.rows] == [2, 7]
        assert report.rows[-1]["abs_error"] == 0
        assert report.rows[-1]["error"] == ""
        assert report.exit_code == 0
        assert (tmp_path / "checks.csv").exists()

    def test_cf_is_deterministic(self, config, tmp_path):
        first = run_experiment(config, "cf", tmp_path / "a", progress=False)
        second = run_experiment(config, "cf", tmp_path / "b", progress=False)
        assert first.to_csv() == second.to_csv()
        assert (tmp_path / "a" / "report.csv").read_bytes() == (tmp_path / "b" / "report.csv").read_bytes()
        assert len(first.rows) == 20

    def test_cf_bad_value(self, config, tmp_path):
        config.cf.value = "one half"
        with pytest.raises(InvalidConfigError):
            run_experiment(config, "cf", tmp_path, progress=False)

    def test_area_of_square_map(self, config, tmp_path):
        config.area.map = MapSpec(family="square")
        config.area.grid.resolution = 128
        config.area.grid.horizon = 100
        report = run_experiment(config, "area", tmp_path, progress=False)
        assert report.rows[0]["value"] == pytest.approx(math.pi, abs=0.15)
        assert (tmp_path / "fields" / "area_square.gf01").exists()
        assert (tmp_path / "fields" / "area_square.ppm").exists()
        assert OutputBundle(tmp_path).validate_structure() == []

    def test_bbox_failure_is_recorded(self, config, tmp_path):
        """A numerical failure still writes the bundle and exits with 3."""
        config.area.map = MapSpec(family="square")
        config.area.grid.bbox = [-0.5, -0.5, 0.5, 0.5]
        config.area.grid.resolution = 32
        report = run_experiment(config, "area", tmp_path, progress=False)
        assert report.exit_code == 3
        meta = json.loads((tmp_path / "metadata.json").read_text())
        assert meta["error"]["error"] == "BboxTooSmallError"

    def test_invalid_schedule_propagates(self, config, tmp_path):
        config.e7.m_sequence = [2, 2, 4]
        with pytest.raises(InvalidScheduleError):
            run_experiment(config, "e7", tmp_path, progress=False)

    def test_cubic_density_needs_high_type(self, config, tmp_path):
        config.e1b.alpha.period = [1]
        with pytest.raises(InvalidConfigError):
            run_experiment(config, "e1b", tmp_path, progress=False)

    def test_unknown_key(self, config, tmp_path):
        with pytest.raises(InvalidConfigError):
            run_experiment(config, "e9", tmp_path)

    @pytest.mark.slow
    def test_area_persistence_flags_slow_schedule(self, config, tmp_path):
        """A_n = n does not make A_n^(1/q_n) grow; the rows and the check say so."""
        config.e2.n_values = [1, 2]
        config.e2.an_rule = "linear"
        config.e2.n0 = 1
        config.e2.grid.resolution = 48
        config.e2.grid.horizon = 30
        config.e2.refinement_resolution = 24
        report = run_experiment(config, "e2", tmp_path, progress=False)
        rows = {row["item"]: row for row in report.rows}
        assert rows["n=1"]["an_condition"] is False
        assert rows["n=1"]["N"] == 3
        assert rows["alpha"]["N"] == 3
        check = next(c for c in report.checks if c.name == "an_condition")
        assert check.status == CheckStatus.FAIL
        assert check.measured == 2.0
        assert report.exit_code in (1, 3)
        meta = json.loads((tmp_path / "metadata.json").read_text())
        assert [r["root_ok"] for r in meta["an_conditions"]] == [False, False]
        assert meta["thresholds"]["an_root_log_factor"] == 1.0

    @pytest.mark.slow
    def test_quadratic_like_experiment(self, config, tmp_path):

        config.e4.samples = 20
        report = run_experiment(config, "e4", tmp_path, progress=False)
        assert report.experiment == "E4_quadratic_like"
        assert [row["item"] for row in report.rows] == ["unperturbed", "perturbed", "control"]
        check = next(c for c in report.checks if c.name == "quadratic_like")
        assert check.status == CheckStatus.PASS


    @pytest.mark.slow
    def test_dimension_experiment(self, config, tmp_path):
        config.e6.resolutions = [128, 256]
        config.e6.scales = [1, 2, 4, 8]
        config.e6.horizon = 200
        config.e6.segment_resolution = 128
        report = run_experiment(config, "e6", tmp_path, progress=False)
        assert [row["item"] for row in report.rows] == ["res=128", "res=256", "segment"]
        checks = {c.name: c for c in report.checks}
        assert checks["segment_control"].status == CheckStatus.PASS
        assert 1.0 < report.rows[1]["dimension"] < 2.0
        assert (tmp_path / "fields" / "e6_256.gf01").exists()


class TestDynLab:
    def test_stats_and_run(self, config, tmp_path):
        lab = DynLab(config=config)
        stats = lab.get_stats()
        assert stats["name"] == "dynlab"
        assert stats["thresholds"]["dens_min"] == 0.45
        report = lab.run("cf", tmp_path)
        assert report.overall_pass

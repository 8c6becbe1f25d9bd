"""Tests for configuration loading, thresholds and config hashes."""

import json
from pathlib import Path

import pytest

from src.core.config import AreaChainConfig, ExperimentId, LabConfig, RotationSpec
from src.core.errors import InvalidConfigError
from src.lab.thresholds import DEFAULT_THRESHOLDS, ThresholdProfile


SHIPPED_CONFIG = Path(__file__).parent.parent / "config" / "config.yaml"


class TestThresholds:
    """Tests for threshold profiles and overrides."""

    def test_defaults(self):
        assert LabConfig().thresholds == DEFAULT_THRESHOLDS

    def test_quick_profile(self):
        cfg = LabConfig(threshold_profile="quick")
        assert cfg.thresholds["dens_min"] == 0.4
        assert cfg.thresholds["abel_median"] == DEFAULT_THRESHOLDS["abel_median"]

    def test_unknown_profile_falls_back(self):
        assert ThresholdProfile.get_profile("nonexistent") == DEFAULT_THRESHOLDS

    def test_override(self):
        cfg = LabConfig(thresholds={"dens_min": 0.6})
        assert cfg.thresholds["dens_min"] == 0.6
        assert cfg.thresholds["area_ratio_min"] == DEFAULT_THRESHOLDS["area_ratio_min"]

    def test_unknown_key(self):
        with pytest.raises(ValueError):
            LabConfig(thresholds={"dens_maximum": 0.6})


class TestLoading:
    """Tests for YAML, JSON and TOML files."""

    def test_shipped_config(self):
        cfg = LabConfig.from_file(SHIPPED_CONFIG)
        assert cfg.e1b.experiment_id == ExperimentId.E1B_DENSITY_CUBIC
        assert cfg.e1b.family == "cubic_siegel"
        assert cfg.e2.epsilon is None
        assert cfg.e7.grid.resolution == 512
        assert cfg.siegel_tool.map.family == "cubic_siegel"

    def test_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"e6": {"resolutions": [128, 256]}, "threshold_profile": "quick"}))
        cfg = LabConfig.from_file(path)
        assert cfg.e6.resolutions == [128, 256]
        assert cfg.thresholds["dens_min"] == 0.4

    def test_toml(self, tmp_path):
        path = tmp_path / "c.toml"
        path.write_text('output_dir = "out"\n\n[cf]\nvalue = "0.5"\nn_terms = 3\n')
        cfg = LabConfig.from_file(path)
        assert cfg.output_dir == "out"
        assert cfg.cf.value == "0.5"

    def test_unsupported_suffix(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("")
        with pytest.raises(InvalidConfigError):
            LabConfig.from_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidConfigError) as exc:
            LabConfig.from_file(tmp_path / "missing.yaml")
        assert exc.value.exit_code == 2

    def test_validation_error_names_field(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("e1:\n  r: 1.5\n")
        with pytest.raises(InvalidConfigError) as exc:
            LabConfig.from_file(path)
        assert exc.value.path == "e1.r"

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{not json")
        with pytest.raises(InvalidConfigError):
            LabConfig.from_file(path)

    def test_non_mapping_root(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(InvalidConfigError):
            LabConfig.from_file(path)

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("DYNLAB_SYSTEM__LOG_LEVEL", "DEBUG")
        assert LabConfig().system.log_level == "DEBUG"

    def test_save_and_reload(self, tmp_path):
        cfg = LabConfig(thresholds={"dens_min": 0.5})
        cfg.save_yaml(tmp_path / "saved.yaml")
        loaded = LabConfig.from_file(tmp_path / "saved.yaml")
        assert loaded.thresholds == cfg.thresholds
        assert loaded.config_hash("e1") == cfg.config_hash("e1")


class TestSections:
    """Tests for section validation and lookup."""

    def test_experiment_lookup(self):
        cfg = LabConfig()
        assert cfg.experiment("siegel") is cfg.siegel_tool
        assert cfg.experiment("e1b").experiment_id == ExperimentId.E1B_DENSITY_CUBIC
        with pytest.raises(InvalidConfigError):
            cfg.experiment("system")
        with pytest.raises(InvalidConfigError):
            cfg.experiment("e9")

    def test_rotation_spec(self):
        assert float(RotationSpec(prefix=[0], period=[1]).to_rotation()) == pytest.approx(0.6180339887498949)
        with pytest.raises(ValueError):
            RotationSpec(prefix=[0, 0])
        with pytest.raises(ValueError):
            RotationSpec(prefix=[])

    def test_chain_lengths(self):
        with pytest.raises(ValueError):
            AreaChainConfig(m_sequence=[2, 4], a_sequence=[40], epsilons=[0.1, 0.1])

    def test_windows(self):
        with pytest.raises(ValueError):
            LabConfig(e1={"windows": [[0.5, 0.25, 0.0, 1.0]]})

    def test_cubic_section_without_id(self):
        cfg = LabConfig(e1b={"n_values": [1, 2]})
        assert cfg.e1b.experiment_id == ExperimentId.E1B_DENSITY_CUBIC
        assert cfg.e1b.family == "cubic_siegel"
        assert cfg.e1.experiment_id == ExperimentId.E1_DENSITY_QUADRATIC
        assert cfg.config_hash("e1b") != cfg.config_hash("e1")

    def test_shared_defaults_fill_sections(self):
        cfg = LabConfig(
            cfrac={"high_type_n": 5}, siegel={"order": 120}, fatou={"validation_sample_size": 7},
            grid={"resolution": 64, "horizon": 50},
        )
        assert cfg.e1.high_type_n == cfg.e1b.high_type_n == cfg.e2.high_type_n == cfg.e7.high_type_n == 5
        assert cfg.e5.high_type_n == 12
        assert cfg.e1.order == cfg.siegel_tool.order == cfg.e5.siegel_order == 120
        assert cfg.e3.order == 1200
        assert cfg.e5.validation_sample_size == 7
        for section in (cfg.e2, cfg.e7, cfg.area):
            assert (section.grid.resolution, section.grid.horizon) == (64, 50)
        cfg.e2.grid.resolution = 32
        assert cfg.e7.grid.resolution == 64

    def test_section_values_override_shared(self):
        cfg = LabConfig(grid={"resolution": 64}, e7={"grid": {"resolution": 32}, "high_type_n": 4})
        assert cfg.e7.grid.resolution == 32
        assert cfg.e2.grid.resolution == 64
        assert cfg.e7.high_type_n == 4
        assert cfg.e2.high_type_n == 3

    def test_shared_defaults_enter_hash(self):
        assert LabConfig(siegel={"order": 120}).config_hash("e1") != LabConfig().config_hash("e1")



class TestConfigHash:
    """Tests for the per-experiment configuration hash."""

    def test_stable(self):
        assert LabConfig().config_hash("e2") == LabConfig().config_hash("e2")
        assert len(LabConfig().config_hash("e2")) == 64

    def test_sensitive_to_parameters_and_thresholds(self):
        base = LabConfig().config_hash("e2")
        assert LabConfig(e2={"n0": 4}).config_hash("e2") != base
        assert LabConfig(thresholds={"area_ratio_min": 0.7}).config_hash("e2") != base

    def test_ignores_workers_and_output(self):
        cfg = LabConfig()
        base = cfg.config_hash("e3")
        cfg.e3.max_workers = 8
        cfg.e3.output_dir = "elsewhere"
        assert cfg.config_hash("e3") == base

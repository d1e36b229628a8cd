"""Tests for run configuration parsing and environment defaults"""

import logging
import math
from pathlib import Path

import pytest

from src.evolution.duhamel import Quadrature
from src.randomization.laws import RandomLaw
from src.utils.config_loader import ConfigLoader, parse_config
from src.utils.env_loader import EnvLoader
from src.utils.errors import ConfigError

from .conftest import CONFIG_BASE

EXAMPLE_CONFIGS = sorted((Path(__file__).parent.parent / "config").glob("*.conf"))


def _config(extra: str, base: str = CONFIG_BASE):
    return parse_config(base + extra)


class TestParseConfig:
    """Flat key = value text"""

    def test_minimal(self):
        cfg = _config("experiment.name = expand\n")
        assert cfg.grid.M == 16
        assert cfg.time.M_t == 5
        assert cfg.randomization.members == 2
        assert cfg.randomization.law is RandomLaw.COMPLEX_GAUSSIAN
        assert cfg.time.quadrature is Quadrature.TRAPEZOID
        assert cfg.depth == 1

    def test_comments_and_blank_lines(self):
        cfg = _config("\n# a comment\nexperiment.name = tail   # trailing\n")
        assert cfg.experiment.name == "tail"

    def test_enum_values(self):
        cfg = _config(
            "experiment.name = randomize\n"
            "randomization.law = uniform-circle\n"
            "randomization.window = smooth-bump\n"
            "time.quadrature = gauss-legendre\n"
        )
        assert cfg.randomization.law is RandomLaw.UNIFORM_CIRCLE
        assert cfg.time.quadrature is Quadrature.GAUSS_LEGENDRE

    def test_ratio_value(self):
        cfg = _config("experiment.name = tail\nexperiment.q = 10/3\n")
        assert cfg.experiment.q == pytest.approx(10.0 / 3.0)

    def test_infinity(self):
        cfg = _config("experiment.name = tail\nexperiment.r = inf\n")
        assert math.isinf(cfg.experiment.r)

    def test_scientific_notation(self):
        cfg = _config("experiment.name = solve\nexperiment.solver_tolerance = 1e-10\n")
        assert cfg.experiment.solver_tolerance == pytest.approx(1e-10)

    def test_flow_sequence(self):
        cfg = _config("experiment.name = gain\nexperiment.horizons = [0.005, 0.01]\n")
        assert cfg.experiment.horizons == [0.005, 0.01]

    def test_overrides(self):
        cfg = parse_config(CONFIG_BASE, {"experiment.name": "expand", "randomization.seed": 9})
        assert cfg.randomization.seed == 9

    def test_explicit_depth(self):
        cfg = _config("experiment.name = expand\nregularity.s = 0.19\nregularity.k = 3\n")
        assert cfg.depth == 3


class TestConfigErrors:
    """Errors name the offending line"""

    def test_missing_equals(self):
        with pytest.raises(ConfigError) as e:
            _config("experiment.name expand\n")
        assert e.value.lines == [7]

    def test_duplicate_key_names_both_lines(self):
        with pytest.raises(ConfigError) as e:
            _config("experiment.name = expand\ngrid.M = 32\n")
        assert e.value.lines == [1, 8]
        assert "line 1, 8" in str(e.value)

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as e:
            _config("experiment.name = expand\ngrid.N = 3\n")
        assert e.value.lines == [8]

    def test_invalid_key(self):
        with pytest.raises(ConfigError):
            _config("experiment.name = expand\ngrid..M = 3\n")

    def test_grid_not_power_of_two(self):
        with pytest.raises(ConfigError) as e:
            parse_config("grid.M = 24\nexperiment.name = expand\n")
        assert e.value.lines == [1]

    def test_missing_experiment(self):
        with pytest.raises(ConfigError):
            parse_config(CONFIG_BASE)

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError):
            _config("experiment.name = nonsense\n")

    def test_even_order(self):
        with pytest.raises(ConfigError):
            _config("experiment.name = smooth-fit\nexperiment.order = 4\n")

    def test_solve_below_s_infinity(self):
        with pytest.raises(ConfigError):
            _config("experiment.name = solve\nregularity.s = 0.1\n")

    def test_solve_sigma_range(self):
        with pytest.raises(ConfigError):
            _config("experiment.name = solve\nregularity.sigma = 0.4\n")

    def test_auto_depth_needs_bracket(self):
        with pytest.raises(ConfigError):
            _config("experiment.name = expand\nregularity.s = 0.6\n")

    def test_scalar_subkey_conflict(self):
        with pytest.raises(ConfigError):
            _config("experiment.name = expand\ndata = 3\n")

    def test_depth_mismatch_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            cfg = _config("experiment.name = expand\nregularity.s = 0.22\nregularity.k = 3\n")
        assert cfg.depth == 3
        assert "expected k=2" in caplog.text


class TestConfigLoader:
    def test_load_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(CONFIG_BASE + "experiment.name = expand\n")
        cfg = ConfigLoader(str(tmp_path)).load("run.cfg")
        assert cfg.grid.M == 16

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            ConfigLoader(str(tmp_path)).load("absent.cfg")


class TestEnvLoader:
    def test_workers(self, monkeypatch):
        monkeypatch.setenv("RANDWAVE_WORKERS", "3")
        assert EnvLoader.get_workers() == 3

    @pytest.mark.parametrize("raw", ["three", "0"])
    def test_bad_workers_fall_back(self, monkeypatch, raw):
        monkeypatch.setenv("RANDWAVE_WORKERS", raw)
        assert EnvLoader.get_workers(default=2) == 2

    def test_output_dir(self, monkeypatch):
        monkeypatch.delenv("RANDWAVE_OUT", raising=False)
        assert EnvLoader.get_output_dir() is None
        monkeypatch.setenv("RANDWAVE_OUT", "/tmp/out")
        assert EnvLoader.get_run_defaults()["output_dir"] == "/tmp/out"

    def test_run_defaults_cover_cli_settings_only(self):
        # LOG_LEVEL is read by the logger itself
        assert set(EnvLoader.get_run_defaults()) == {"workers", "output_dir"}


class TestShippedConfigs:
    def test_examples_present(self):
        assert len(EXAMPLE_CONFIGS) == 9

    @pytest.mark.parametrize("path", EXAMPLE_CONFIGS, ids=lambda p: p.stem)
    def test_example_parses(self, path, caplog):
        with caplog.at_level(logging.WARNING):
            cfg = parse_config(path.read_text())
        assert cfg.experiment.name.replace("-", "_") == path.stem
        assert "outside the bracket" not in caplog.text

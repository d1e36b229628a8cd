"""Integration tests for the coordinator and the command line"""

import json
import logging

import pytest

from src.cli import EXIT_CONFIG_ERROR, EXIT_EXPERIMENT_ERROR, EXIT_OK, main
from src.monitoring.metrics_collector import METRICS_FILE, MetricsCollector
from src.orchestrator.coordinator import Coordinator, run
from src.persistence.manifest import read_manifest, verify_manifest
from src.persistence.reports import read_csv
from src.persistence.snapshots import read_expansion
from src.utils.config_loader import parse_config
from src.utils.logger import configure_logging

from .conftest import CONFIG_BASE

EXPAND = CONFIG_BASE + """\
experiment.name = expand
regularity.s = 0.19
regularity.k = 3
data.amplitude = 0.5
"""


class TestCoordinator:
    """One configured experiment per run"""

    def test_expand_writes_every_order(self, tmp_path):
        manifest = run(parse_config(EXPAND), out_dir=tmp_path)
        record = manifest.experiments["expand"]
        assert record.status == "completed"
        for order in (1, 3, 5):
            assert f"expansion/order_{order}/snap_0004.rwv" in manifest.files
        assert "expand.csv" in record.files
        assert read_expansion(tmp_path / "expansion").orders == [1, 3, 5]

        name, columns, rows = read_csv(tmp_path / "expand.csv")
        assert name == "expand"
        assert columns == ["order", "N", "norm"]
        assert {row[0] for row in rows} == {1.0, 3.0, 5.0}

    def test_rerun_is_byte_identical(self, tmp_path):
        cfg = parse_config(EXPAND)
        run(cfg, out_dir=tmp_path / "a")
        run(cfg, out_dir=tmp_path / "b")
        for name in ("expand.csv", "expand.json", "expansion/order_5/snap_0004.rwv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_manifest_verifies(self, tmp_path):
        run(parse_config(EXPAND), out_dir=tmp_path)
        assert verify_manifest(tmp_path).ok
        (tmp_path / "expand.csv").write_text("tampered\n")
        assert verify_manifest(tmp_path).changed == ["expand.csv"]

    def test_manifest_echoes_config(self, tmp_path):
        run(parse_config(EXPAND), out_dir=tmp_path)
        manifest = read_manifest(tmp_path)
        assert manifest.config["grid"]["M"] == 16
        assert manifest.config["regularity"]["k"] == 3
        assert manifest.wall_clock_seconds >= 0

    def test_randomize_members(self, tmp_path):
        cfg = parse_config(CONFIG_BASE + "experiment.name = randomize\n")
        manifest = run(cfg, out_dir=tmp_path)
        assert manifest.experiments["randomize"].status == "completed"
        assert "members/member_0001.rwv" in manifest.files
        _, _, rows = read_csv(tmp_path / "randomize.csv")
        assert [row[0] for row in rows] == [0.0, 1.0]

    def test_snapshots_can_be_disabled(self, tmp_path):
        cfg = parse_config(CONFIG_BASE + "experiment.name = randomize\noutput.snapshots = false\n")
        manifest = run(cfg, out_dir=tmp_path)
        assert not any(f.endswith(".rwv") for f in manifest.files)

    def test_small_data_solve_passes(self, tmp_path):
        cfg = parse_config(CONFIG_BASE + "experiment.name = solve\ndata.amplitude = 0.1\n")
        manifest = run(cfg, out_dir=tmp_path)
        assert manifest.experiments["solve"].status == "passed"
        assert "residual/snap_0000.rwv" in manifest.files

    def test_bilinear_tube_pairing(self, tmp_path):
        text = "experiment.name = bilinear\nexperiment.pairing = tube\nexperiment.n2 = [1, 2, 4]\n"
        cfg = parse_config(CONFIG_BASE + text)
        manifest = run(cfg, out_dir=tmp_path)
        assert manifest.experiments["bilinear"].status in ("passed", "failed")
        assert json.loads((tmp_path / "bilinear.json").read_text())["pairing"] == "tube"

    def test_experiment_error_is_recorded(self, tmp_path):
        cfg = parse_config(CONFIG_BASE + "experiment.name = gain\nregularity.k = 1\n")
        manifest = run(cfg, out_dir=tmp_path)
        record = manifest.experiments["gain"]
        assert record.status == "error"
        assert record.error.startswith("ValueError")
        assert manifest.has_errors
        assert verify_manifest(tmp_path).ok

    def test_metrics_written(self, tmp_path):
        metrics = MetricsCollector()
        run(parse_config(EXPAND), out_dir=tmp_path, metrics=metrics)
        text = (tmp_path / METRICS_FILE).read_text()
        assert 'randwave_experiments_total{experiment="expand",status="completed"} 1.0' in text
        assert metrics.summary()["by_status"] == {"completed": 1}

    def test_output_dir_from_config(self, tmp_path):
        cfg = parse_config(EXPAND + f"output.dir = {tmp_path / 'cfg-out'}\n")
        assert Coordinator(cfg).out_dir == tmp_path / "cfg-out"

    def test_stale_manifest_removed(self, tmp_path):
        (tmp_path / "manifest.json").write_text("{}")
        run(parse_config(EXPAND), out_dir=tmp_path)
        assert read_manifest(tmp_path).experiments["expand"].status == "completed"


class TestCli:
    """Exit codes: 0 ok, 1 experiment error, 2 configuration error"""

    @pytest.fixture
    def config_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(CONFIG_BASE + "regularity.s = 0.19\nregularity.k = 3\ndata.amplitude = 0.5\n")
        return path

    def test_run_ok(self, tmp_path, config_file, capsys):
        out = tmp_path / "out"
        assert main(["expand", "--config", str(config_file), "--out", str(out)]) == EXIT_OK
        assert "expand: completed" in capsys.readouterr().out
        assert (out / "manifest.json").exists()

    def test_seed_flag_overrides_file(self, tmp_path, config_file):
        out = tmp_path / "out"
        main(["randomize", "--config", str(config_file), "--out", str(out), "--seed", "17"])
        assert read_manifest(out).config["randomization"]["seed"] == 17

    def test_config_error(self, tmp_path, capsys):
        path = tmp_path / "bad.cfg"
        path.write_text("grid.M = 12\n")
        assert main(["expand", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_CONFIG_ERROR
        assert "line 1" in capsys.readouterr().err
        assert not (tmp_path / "out").exists()

    def test_experiment_error(self, tmp_path):
        path = tmp_path / "gain.cfg"
        path.write_text(CONFIG_BASE + "regularity.k = 1\n")
        assert main(["gain", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_EXPERIMENT_ERROR

    def test_verify_manifest(self, tmp_path, config_file, capsys):
        out = tmp_path / "out"
        main(["expand", "--config", str(config_file), "--out", str(out)])
        assert main(["verify-manifest", str(out)]) == EXIT_OK
        (out / "expand.json").unlink()
        assert main(["verify-manifest", str(out)]) == EXIT_EXPERIMENT_ERROR
        assert "missing: expand.json" in capsys.readouterr().out

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            main(["nonsense"])

    def test_dotenv_log_level_applies(self, tmp_path, config_file, monkeypatch):
        monkeypatch.delenv("LOG_LEVEL", raising=False)
        monkeypatch.chdir(tmp_path)
        (tmp_path / ".env").write_text("LOG_LEVEL=DEBUG\n")
        try:
            main(["expand", "--config", str(config_file), "--out", str(tmp_path / "out")])
            assert logging.getLogger().level == logging.DEBUG
        finally:
            monkeypatch.undo()
            configure_logging(force=True)

import json

import numpy as np
import pytest

from emconv.harness import read_spectrum, write_config
from emconv.harness.cli import main


class TestSimulate:
    def test_reflection(self, tmp_path, capsys):
        assert main(["simulate", "--model", "reflection", "--port", "1",
                     "--out", str(tmp_path)]) == 0
        path = tmp_path / "sim_reflection_port1.csv"
        assert path.exists()
        spec = read_spectrum(path)
        assert len(spec) == 2001
        meta = json.loads((tmp_path / "sim_reflection_port1.csv.meta.json")
                          .read_text())
        assert meta["f0_hz"] == pytest.approx(7.444e9)

    def test_eit(self, tmp_path):
        assert main(["simulate", "--model", "eit", "--port", "2",
                     "--points", "501", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "sim_eit_port2.csv").exists()

    def test_conversion(self, tmp_path):
        assert main(["simulate", "--model", "conversion",
                     "--out", str(tmp_path)]) == 0
        text = (tmp_path / "sim_conversion.csv").read_text(encoding="utf-8")
        assert text.splitlines()[0] == "detuning_hz,power"
        meta = json.loads((tmp_path / "sim_conversion.csv.meta.json")
                          .read_text())
        assert "expected_fwhm_hz" in meta


class TestSweep:
    def test_grid_default(self, tmp_path):
        assert main(["sweep", "grid", "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "sweep_grid.csv").read_text().splitlines()
        assert lines[0] == "p1_dbm,p2_dbm,c1,c2,s11,s22,t2"
        assert len(lines) == 57

    def test_grid_cooperativity_axes(self, tmp_path):
        assert main(["sweep", "grid", "--c1", "1,10", "--c2", "2,20",
                     "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "sweep_grid.csv").read_text().splitlines()
        assert len(lines) == 5

    def test_bandwidth(self, tmp_path):
        assert main(["sweep", "bandwidth", "--coops", "1,35",
                     "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "sweep_bandwidth.csv").read_text().splitlines()
        assert lines[0].startswith("coop,fwhm_hz")
        assert len(lines) == 3

    def test_dynamic_range(self, tmp_path):
        assert main(["sweep", "dynamic-range", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "sweep_dynamic_range.csv").exists()

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["sweep", "grid", "--seed", "9",
                         "--out", str(out)]) == 0
        assert (a / "sweep_grid.csv").read_bytes() == \
            (b / "sweep_grid.csv").read_bytes()
        assert (a / "sweep_grid.csv.meta.json").read_bytes() == \
            (b / "sweep_grid.csv.meta.json").read_bytes()


class TestSynthAndFit:
    def test_synth_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["synth", "--model", "single-reflection",
                         "--sigma", "0.02", "--seed", "7",
                         "--out", str(out)]) == 0
        name = "synth_single-reflection_port1.csv"
        assert (a / name).read_bytes() == (b / name).read_bytes()
        truth = json.loads((a / "synth_single-reflection_port1.truth.json")
                           .read_text())
        assert truth["seed"] == 7
        assert truth["noise_sigma"] == 0.02

    def test_fit_recovers_synth_truth(self, tmp_path):
        assert main(["synth", "--model", "single-reflection",
                     "--out", str(tmp_path)]) == 0
        data = tmp_path / "synth_single-reflection_port1.csv"
        assert main(["fit", "--model", "single-reflection", "--data",
                     str(data), "--out", str(tmp_path)]) == 0
        result = json.loads((tmp_path / "fit_single-reflection.json")
                            .read_text())
        truth = json.loads((tmp_path / "synth_single-reflection_port1"
                            ".truth.json").read_text())
        assert result["converged"]
        assert result["params"]["f0_hz"] == pytest.approx(truth["f0_hz"],
                                                          rel=1e-9)
        assert result["params"]["kappa_hz"] == pytest.approx(
            truth["kappa_hz"], rel=1e-6)

    def test_fit_two_mode_eit_via_files(self, tmp_path):
        for port in ("1", "2"):
            assert main(["synth", "--model", "two-mode-eit", "--port", port,
                         "--points", "4001", "--out", str(tmp_path)]) == 0
        assert main(["fit", "--model", "two-mode-eit", "--data",
                     str(tmp_path / "synth_two-mode-eit_port1.csv"),
                     str(tmp_path / "synth_two-mode-eit_port2.csv"),
                     "--out", str(tmp_path)]) == 0
        result = json.loads((tmp_path / "fit_two-mode-eit.json").read_text())
        truth = json.loads((tmp_path / "synth_two-mode-eit_port1.truth.json")
                           .read_text())
        assert result["derived"]["c1"] == pytest.approx(truth["c1"], rel=1e-4)

    def test_fit_lorentzian_from_conversion(self, tmp_path):
        assert main(["simulate", "--model", "conversion", "--points", "1001",
                     "--out", str(tmp_path)]) == 0
        assert main(["fit", "--model", "lorentzian", "--data",
                     str(tmp_path / "sim_conversion.csv"),
                     "--out", str(tmp_path)]) == 0
        result = json.loads((tmp_path / "fit_lorentzian.json").read_text())
        meta = json.loads((tmp_path / "sim_conversion.csv.meta.json")
                          .read_text())
        assert result["params"]["fwhm_hz"] == pytest.approx(
            meta["expected_fwhm_hz"], rel=0.01)


class TestCoolAndNoise:
    def test_cool(self, tmp_path):
        assert main(["cool", "--drive", "1", "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "cool_drive1.csv").read_text().splitlines()
        assert lines[0] == "p_dbm,n_drive,coop,n_res,n_mech"
        assert len(lines) == 9

    def test_noise(self, tmp_path):
        assert main(["noise", "--p1", "-5", "--p2", "-5",
                     "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "noise_budget.csv").read_text().splitlines()
        assert len(lines) == 2


class TestConfigHandling:
    def test_config_file_used(self, tmp_path, cfg):
        path = tmp_path / "dev.ini"
        write_config(path, cfg)
        assert main(["simulate", "--model", "reflection", "--config",
                     str(path), "--out", str(tmp_path)]) == 0

    def test_env_var_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("EMCONV_OUT", str(tmp_path))
        assert main(["sweep", "dynamic-range"]) == 0
        assert (tmp_path / "sweep_dynamic_range.csv").exists()


class TestErrorReporting:
    def test_unknown_preset(self, tmp_path, capsys):
        code = main(["simulate", "--model", "reflection",
                     "--preset", "bogus", "--out", str(tmp_path)])
        assert code == 3
        err = json.loads(capsys.readouterr().err.strip())
        assert err["error"] == "config"

    def test_missing_config_file(self, tmp_path, capsys):
        code = main(["simulate", "--model", "reflection",
                     "--config", str(tmp_path / "nope.ini"),
                     "--out", str(tmp_path)])
        assert code == 3
        assert json.loads(capsys.readouterr().err.strip())["error"] == "config"

    def test_bad_format(self, tmp_path, capsys):
        code = main(["simulate", "--model", "reflection",
                     "--format", "parquet", "--out", str(tmp_path)])
        assert code == 4
        err = json.loads(capsys.readouterr().err.strip())
        assert err["error"] == "invalid-input"

    def test_bad_data_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1,2\n", encoding="utf-8")
        code = main(["fit", "--model", "single-reflection",
                     "--data", str(bad), "--out", str(tmp_path)])
        assert code == 6
        err = json.loads(capsys.readouterr().err.strip())
        assert err["error"] == "data-format"

    def test_noise_without_heating_model(self, tmp_path, cfg, capsys):
        from emconv.harness.config import DeviceConfig
        bare = DeviceConfig(cfg.resonators, cfg.mech, cfg.drives,
                            cfg.calibrations, cfg.gains_db, None)
        path = tmp_path / "dev.ini"
        write_config(path, bare)
        code = main(["noise", "--config", str(path), "--out", str(tmp_path)])
        assert code == 3
        assert json.loads(capsys.readouterr().err.strip())["error"] == "config"

    def test_bad_numeric_list(self, tmp_path, capsys):
        code = main(["sweep", "bandwidth", "--coops", "1,abc",
                     "--out", str(tmp_path)])
        assert code == 4

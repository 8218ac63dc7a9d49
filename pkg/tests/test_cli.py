import json

import pytest

from hapsran.cli import main

SMALL_CONFIG = """\
[scenario]
n_bases = 30
m_targets = 20
seed = 9

[study]
trials = 3
ue_density_per_km2 = 100
"""


@pytest.fixture(scope="module")
def config_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "small.ini"
    path.write_text(SMALL_CONFIG)
    return str(path)


@pytest.fixture(scope="module")
def scenario_dir(tmp_path_factory, config_file):
    out = tmp_path_factory.mktemp("scenario")
    assert main(["scenario", "--config", config_file, "--out", str(out)]) == 0
    return str(out)


class TestScenarioCommand:
    def test_outputs_exist(self, scenario_dir, tmp_path):
        from pathlib import Path

        base = Path(scenario_dir)
        assert (base / "scenario.csv").is_file()
        assert (base / "scenario_stats.json").is_file()
        sidecar = json.loads((base / "scenario_stats.json").read_text())
        assert sidecar["n_bs"] == 20

    def test_rerun_identical(self, config_file, scenario_dir, tmp_path):
        from pathlib import Path

        assert main(["scenario", "--config", config_file, "--out", str(tmp_path)]) == 0
        for name in ("scenario.csv", "scenario_stats.json"):
            assert (tmp_path / name).read_bytes() == (Path(scenario_dir) / name).read_bytes()

    def test_invalid_targets_exit_2(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[scenario]\nn_bases = 5\nm_targets = 0\n")
        assert main(["scenario", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2

    def test_missing_config_exit_2(self, tmp_path):
        assert main(["scenario", "--config", str(tmp_path / "nope.ini"), "--out", str(tmp_path)]) == 2


class TestRunCommand:
    def test_outputs(self, config_file, scenario_dir, tmp_path):
        code = main(
            ["run", "--config", config_file, "--scenario", scenario_dir, "--out", str(tmp_path)]
        )
        assert code == 0
        for name in ("figure2.csv", "figure3.csv", "figure45.csv", "trials.csv", "manifest.json"):
            assert (tmp_path / name).is_file()
        f3 = (tmp_path / "figure3.csv").read_text().splitlines()
        assert len(f3) == 1 + 3  # header + trials
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["n_trials"] == 3
        assert "config_sha256" in manifest

    def test_trials_flag_overrides(self, config_file, scenario_dir, tmp_path):
        code = main(
            [
                "run", "--config", config_file, "--scenario", scenario_dir,
                "--out", str(tmp_path), "--trials", "2",
            ]
        )
        assert code == 0
        assert len((tmp_path / "figure3.csv").read_text().splitlines()) == 3

    def test_missing_scenario_exit_2(self, config_file, tmp_path):
        code = main(
            ["run", "--config", config_file, "--scenario", str(tmp_path), "--out", str(tmp_path)]
        )
        assert code == 2

    def test_export_schedule(self, config_file, scenario_dir, tmp_path):
        code = main(
            [
                "run", "--config", config_file, "--scenario", scenario_dir,
                "--out", str(tmp_path), "--trials", "1", "--export-schedule",
            ]
        )
        assert code == 0
        header = (tmp_path / "schedule.csv").read_text().splitlines()[0]
        assert header == "hour,bs_id,active,energy"


class TestTrialCommand:
    def test_valid_trial(self, config_file, scenario_dir, capsys):
        code = main(
            [
                "trial", "--config", config_file, "--scenario", scenario_dir,
                "--elevation", "90", "--indoor", "0.7", "--traditional", "0.5",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "c_haps:" in out
        assert "saving[week]" in out

    def test_out_of_set_elevation_exit_2(self, config_file, scenario_dir):
        code = main(
            [
                "trial", "--config", config_file, "--scenario", scenario_dir,
                "--elevation", "45", "--indoor", "0.7", "--traditional", "0.5",
            ]
        )
        assert code == 2

    def test_repeatable_dump(self, config_file, scenario_dir, capsys):
        argv = [
            "trial", "--config", config_file, "--scenario", scenario_dir,
            "--elevation", "60", "--indoor", "0.8", "--traditional", "0.4",
        ]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        second = capsys.readouterr().out
        assert first == second


class TestEnvOverrides:
    def test_env_var_overrides_config(self, config_file, monkeypatch, tmp_path):
        monkeypatch.setenv("HAPSRAN_SCENARIO_M_TARGETS", "7")
        out = tmp_path / "s"
        assert main(["scenario", "--config", config_file, "--out", str(out)]) == 0
        sidecar = json.loads((out / "scenario_stats.json").read_text())
        assert sidecar["n_bs"] == 7

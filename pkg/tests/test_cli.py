import os

import pytest

from photonlab.cli.config import RunConfig, default_config_toml, load_run_config
from photonlab.cli.main import EXIT_DATA, EXIT_OK, EXIT_USAGE, main, summarize
from photonlab.core.exceptions import ConfigError
from photonlab.core.types import Measurement
from photonlab.experiments.report import ExperimentReport


def _report_path(out, name, version=0):
    return os.path.join(str(out), name, f"version_{version}", "report.json")


def test_no_command(capsys):
    assert main([]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().out


def test_dump_defaults(tmp_path, capsys):
    assert main(["simulate", "--dump-defaults"]) == EXIT_OK
    dumped = capsys.readouterr().out
    assert 'scenario = "hbt"' in dumped

    path = tmp_path / "run.toml"
    path.write_text(default_config_toml())
    config = load_run_config(str(path))
    assert config.emitter.tau_ps > 0
    assert config.detector.dead_time_ps == 22_000


def test_list_presets(capsys):
    assert main(["simulate", "--list-presets"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("ideal", "qd1"):
        assert name in out


@pytest.mark.parametrize(
    ["argv", "code"], [
        [["simulate", "--scenario", "laser"], EXIT_USAGE],
        [["simulate", "--scenario", "mmi_split", "--n-photons", "zero"], EXIT_USAGE],
        [["simulate", "--scenario", "mmi_split", "--unknown-flag", "1"], EXIT_USAGE],
        [["simulate", "--preset", "qd9"], EXIT_USAGE],
        [["simulate", "--config", "missing.toml"], EXIT_USAGE],
        [["analyze", "missing.ptag", "--scenario", "hbt"], EXIT_DATA],
        [["analyze", "tags.bin", "--scenario", "hbt"], EXIT_USAGE],
        [["analyze", "missing.ptag", "--scenario", "fpi"], EXIT_USAGE],
        [["report"], EXIT_USAGE],
    ]
)
def test_exit_codes(argv, code, tmp_path):
    assert main(argv + ["--out", str(tmp_path)]) == code


def test_invalid_config(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('scenario = "hom"\n\n[emitter]\ntau_ps = 180.0\n\n[emitter.blink]\nk_on_c = 1.0\n')
    with pytest.raises(ConfigError) as info:
        load_run_config(str(path))
    assert "emitter.blink.k_on_c" in str(info.value)
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path)]) == EXIT_USAGE


def test_command_line_overrides_the_config(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("scenario: mmi_split\nseed: 4\noptions:\n  n_photons: 100000\n")
    config = load_run_config(str(path), seed=9, preset=None)
    assert config == RunConfig(scenario="mmi_split", seed=9, options=dict(n_photons=100_000))


def test_simulate_from_config(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("scenario: mmi_split\nseed: 4\noptions:\n  n_photons: 100000\n")
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path)]) == EXIT_OK

    report = ExperimentReport.load(_report_path(tmp_path, "mmi_split"))
    assert report.config["options"]["n_photons"] == 100_000
    assert report.metric("port_0") + report.metric("port_1") <= 100_000
    assert report.passed


def test_simulate_is_reproducible(tmp_path):
    argv = ["simulate", "--scenario", "attenuation", "--seed", "5", "--n-photons", "100000", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    assert main(argv) == EXIT_OK

    first = ExperimentReport.load(_report_path(tmp_path, "attenuation", 0))
    second = ExperimentReport.load(_report_path(tmp_path, "attenuation", 1))
    assert first.digest() == second.digest()
    assert os.path.isfile(os.path.join(str(tmp_path), "attenuation", "version_0", first.artifacts["attenuation_svg"]))


def test_simulate_then_analyze(tmp_path):
    common = ["--scenario", "tcspc", "--seed", "2", "--n-pulses", "300000", "--out", str(tmp_path), "--name", "tc"]
    assert main(["simulate", *common, "--emit-tags", "--tag-format", "csv"]) == EXIT_OK
    simulated = ExperimentReport.load(_report_path(tmp_path, "tc", 0))
    tags = os.path.join(str(tmp_path), "tc", "version_0", simulated.artifacts["tags"])
    assert tags.endswith("tags.csv")

    assert main(["analyze", tags, *common]) == EXIT_OK
    analyzed = ExperimentReport.load(_report_path(tmp_path, "tc", 1))
    assert analyzed.metric("tau_ps") == simulated.metric("tau_ps")
    assert analyzed.details["tags"] == tags


def test_analyze_corrupt_tags(tmp_path):
    path = tmp_path / "tags.ptag"
    path.write_bytes(b"PTAG\x01")
    assert main(["analyze", str(path), "--scenario", "hbt", "--out", str(tmp_path)]) == EXIT_DATA


def _preset_report(preset, g2_raw, v_raw):
    report = ExperimentReport(scenario="hom", preset=preset, seed=0)
    report.add_metric("g2_raw", Measurement(g2_raw, 0.001))
    report.add_metric("v_raw", Measurement(v_raw, 0.01))
    return report


def test_summarize():
    single = _preset_report("qd1", 0.02, 0.75)
    assert summarize([single]) is single
    with pytest.raises(ConfigError):
        summarize([])

    summary = summarize([_preset_report("qd1", 0.02, 0.75), _preset_report("qd2", 0.04, 0.65)])
    assert summary.scenario == "summary"
    assert set(summary.details["rows"]) == {"qd1", "qd2"}
    assert summary.metric("g2_raw_mean") == pytest.approx(0.03)
    assert summary.metric("v_raw_mean") == pytest.approx(0.70)


def test_report_command(tmp_path):
    paths = []
    for preset, g2_raw, v_raw in (("qd1", 0.02, 0.75), ("qd2", 0.04, 0.65)):
        path = str(tmp_path / f"{preset}.json")
        _preset_report(preset, g2_raw, v_raw).save(path)
        paths.append(path)
    assert main(["report", *paths, "--out", str(tmp_path)]) == EXIT_OK

    summary = ExperimentReport.load(_report_path(tmp_path, "summary"))
    assert summary.metric("g2_raw_mean") == pytest.approx(0.03)
    assert "summary_svg" in summary.artifacts

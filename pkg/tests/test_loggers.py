import json
import os
from argparse import Namespace

import numpy as np

from photonlab.adapters import read_tags
from photonlab.core.types import Measurement, TagStream
from photonlab.correlator.histogram import CorrelationHistogram
from photonlab.experiments.report import ExperimentReport
from photonlab.loggers.report_logger import ReportLogger
from photonlab.utils.plotting import HistogramFigure


def _logger(tmp_path, **kwargs) -> ReportLogger:
    return ReportLogger(Namespace(output_dir=str(tmp_path), name="hbt", **kwargs))


def _report() -> ExperimentReport:
    report = ExperimentReport(scenario="hbt", preset="qd1", seed=3, config=dict(n_pulses=1000, emitter=dict(tau=201.0)))
    report.add_metric("g2_raw", Measurement(0.025, 0.002))
    report.add_metric("g2_bgc", Measurement(float("nan"), float("nan")))
    histogram = CorrelationHistogram.zeros(100, 1000)
    report.histograms["g2"] = histogram
    report.figures["g2"] = HistogramFigure(histogram.delays, histogram.counts)
    return report


def _read_lines(path):
    with open(path) as fi:
        return [json.loads(line) for line in fi]


def test_versions(tmp_path):
    first = _logger(tmp_path)
    assert first.version == 0
    first.log_metrics(dict(a=1.0))
    first.finalize("success")
    assert os.path.isdir(os.path.join(str(tmp_path), "hbt", "version_0"))

    second = _logger(tmp_path)
    assert second.version == 1
    assert second.log_dir == os.path.join(str(tmp_path), "hbt", "version_1")

    fixed = _logger(tmp_path, version=7)
    assert fixed.version == 7


def test_log_metrics(tmp_path):
    report_logger = _logger(tmp_path)
    report_logger.log_metrics(dict(g2=np.float64(0.5), counts=np.int64(10)))
    report_logger.log_metrics(dict(g2=0.4))
    report_logger.log_metrics(dict(g2=0.3), step=10)
    report_logger.log_metrics({})
    report_logger.finalize("success")

    lines = _read_lines(os.path.join(report_logger.log_dir, ReportLogger.NAME_OUTPUT_FILE))
    assert lines == [
        dict(step=0, g2=0.5, counts=10),
        dict(step=1, g2=0.4),
        dict(step=10, g2=0.3),
    ]


def test_hyperparameters_are_merged(tmp_path):
    report_logger = _logger(tmp_path)
    report_logger.log_hyperparams(Namespace(seed=1, emitter=dict(tau=201.0)))
    report_logger.log_hyperparams(dict(seed=2, threads=None, shape=np.zeros(2)))

    with open(os.path.join(report_logger.log_dir, ReportLogger.NAME_HPARAMS_FILE)) as fi:
        hparams = json.load(fi)
    assert hparams == {"seed": 2, "emitter/tau": 201.0, "threads": None, "shape": [0.0, 0.0]}


def test_log_report(tmp_path):
    report_logger = _logger(tmp_path)
    tags = TagStream.merge(TagStream.from_times([5, 20]), TagStream.from_times([7], channel=1))
    path = report_logger.log_report(_report(), tags=tags, tag_format="csv")
    report_logger.finalize("success")

    assert path == os.path.join(report_logger.log_dir, ReportLogger.NAME_REPORT_FILE)
    report = ExperimentReport.load(path)
    assert report.artifacts == dict(g2_csv="g2.csv", g2_svg="g2.svg", tags="tags.csv")
    for filename in report.artifacts.values():
        assert os.path.isfile(os.path.join(report_logger.log_dir, filename))
    assert report.metrics["g2_bgc"].value is None
    assert report.metric("g2_raw") == 0.025

    loaded = read_tags(os.path.join(report_logger.log_dir, "tags.csv"))
    assert loaded.times.tolist() == [5, 7, 20]

    with open(os.path.join(report_logger.log_dir, ReportLogger.NAME_METADATA_FILE)) as fi:
        assert json.load(fi) == dict(scenario="hbt", seed=3, schema_version=1, preset="qd1")
    with open(os.path.join(report_logger.log_dir, ReportLogger.NAME_HPARAMS_FILE)) as fi:
        assert json.load(fi) == {"n_pulses": 1000, "emitter/tau": 201.0}
    lines = _read_lines(os.path.join(report_logger.log_dir, ReportLogger.NAME_OUTPUT_FILE))
    assert lines == [dict(step=0, g2_raw=0.025, g2_bgc=None)]

    with open(os.path.join(report_logger.log_dir, "g2.svg")) as fi:
        assert "<svg" in fi.read()

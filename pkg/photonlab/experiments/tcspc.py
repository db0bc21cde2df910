r"""
Lifetime of the exciton from the arrival times of single photons relative to the laser trigger.
"""
import logging
from argparse import ArgumentParser
from typing import Optional

from photonlab.analysis.decay import fit_decay
from photonlab.analysis.models import emg
from photonlab.core.configs import DetectorConfig
from photonlab.core.exceptions import DomainError
from photonlab.core.types import Measurement, TagStream
from photonlab.correlator.tcspc import tcspc
from photonlab.experiments.presets import QdPreset
from photonlab.experiments.report import ExperimentReport
from photonlab.experiments.simulation import simulate_tags, single_route
from photonlab.experiments.super_experiment import SuperExperiment, start_report
from photonlab.utils.plotting import HistogramFigure

logger = logging.getLogger(__name__)

TCSPC_DETECTOR = DetectorConfig(irf_sigma_ps=60.0, efficiency=0.1)
DEFAULT_PULSES = 2 * 10 ** 6
TCSPC_BIN_PS = 16
TCSPC_OFFSET_PS = 1_000
TCSPC_CHANNEL = 0


def simulate_tcspc(preset: QdPreset, n_pulses: int, seed: int, detector: DetectorConfig = TCSPC_DETECTOR) -> TagStream:
    return simulate_tags(
        preset.emitter, preset.circuit, detector, single_route(preset.circuit, seed), n_pulses, seed,
        channels=(TCSPC_CHANNEL, )
    )


def analyze_tcspc(
    tags: TagStream,
    preset: QdPreset,
    seed: int = 0,
    detector: DetectorConfig = TCSPC_DETECTOR,
    n_pulses: Optional[int] = None,
    bin_ps: int = TCSPC_BIN_PS,
    offset_ps: int = TCSPC_OFFSET_PS,
    channel: int = TCSPC_CHANNEL,
) -> ExperimentReport:
    r"""
    Histogram the tags of `channel` over one laser period, starting `offset_ps` before each trigger, and fit the
    decay convolved with the detector response of `detector`.
    """
    report = start_report("tcspc", preset, seed, detector, n_pulses=n_pulses, bin_ps=bin_ps, offset_ps=offset_ps,
                          channel=channel)
    period = preset.circuit.rep_period_ps
    hist = tcspc(tags.channel(channel), period, period, bin_ps, offset_ps=min(offset_ps, period - 1))
    report.add_metric("counts", Measurement(float(hist.total)))
    report.histograms["tcspc"] = hist

    try:
        fit = fit_decay(hist, detector.irf_sigma_ps)
    except DomainError as ex:
        logger.warning("Decay fit skipped: %s", ex)
        report.add_flags("low_statistics")
        report.add_metric("tau_ps", Measurement(float("nan"), float("nan")))
        report.figures["tcspc"] = HistogramFigure(hist.centers, hist.counts, xlabel="time (ps)", ylabel="counts",
                                                  logy=True)
        return report

    if not fit.converged:
        report.add_flags("fit_not_converged")
    report.add_flags(*fit.flags)
    report.add_metric("tau_ps", fit["tau"])
    report.details["decay_fit"] = fit.to_dict()

    curve = None
    if fit.converged:
        values = fit.values()
        sigma = detector.irf_sigma_ps
        curve = (hist.centers, values["amplitude"] * bin_ps * emg(hist.centers, values["tau"], sigma, values["t0"])
                 + values["background"])
    report.figures["tcspc"] = HistogramFigure(hist.centers, hist.counts, fit=curve, xlabel="time (ps)",
                                              ylabel="counts", title="time-resolved emission", logy=True)
    report.check_against(preset.expected)
    logger.info("TCSPC on %s: tau=%s", preset.name, fit["tau"])
    return report


def run_tcspc(preset: QdPreset, n_pulses: int = DEFAULT_PULSES, seed: int = 0,
              detector: DetectorConfig = TCSPC_DETECTOR) -> ExperimentReport:
    tags = simulate_tcspc(preset, n_pulses, seed, detector=detector)
    return analyze_tcspc(tags, preset, seed, detector=detector, n_pulses=n_pulses)


class TcspcExperiment(SuperExperiment):

    name = "tcspc"
    uses_tags = True
    default_detector = TCSPC_DETECTOR

    def simulate(self) -> TagStream:
        return simulate_tcspc(self.preset, self.pulses(DEFAULT_PULSES), self.seed, detector=self.detector)

    def analyze(self, data: TagStream) -> ExperimentReport:
        return analyze_tcspc(
            data,
            self.preset,
            self.seed,
            detector=self.detector,
            n_pulses=self.option("n_pulses"),
            bin_ps=self.option("bin_ps", TCSPC_BIN_PS),
        )

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument(
            '--bin-ps', type=int, required=False, default=None, help='Width of the start-stop histogram bins'
        )

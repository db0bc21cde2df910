r"""
Intensity correlation of the two outputs of the on-chip splitter: raw and background-corrected `g2(0)` and the
blinking signature of the side peaks.
"""
import logging
from argparse import ArgumentParser
from typing import Optional, Sequence

from pytorch_lightning.utilities.rank_zero import rank_zero_warn

from photonlab.analysis.g2 import DEFAULT_SIDE_PEAKS, extract_g2_raw, fit_g2_background
from photonlab.circuit.ledger import PhotonLedger
from photonlab.core.configs import DetectorConfig
from photonlab.core.exceptions import DomainError
from photonlab.core.types import Measurement, TagStream
from photonlab.experiments.correlation import (
    COARSE_RANGE_PS,
    FINE_BIN_PS,
    MIN_COINCIDENCES,
    PairCorrelation,
    acquisition_duration,
    coarse_figure,
    correlate_pair,
    fine_figure,
)
from photonlab.experiments.presets import QdPreset
from photonlab.experiments.report import ExperimentReport
from photonlab.experiments.simulation import hbt_route, simulate_tags
from photonlab.experiments.super_experiment import SuperExperiment, start_report

logger = logging.getLogger(__name__)

HBT_DETECTOR = DetectorConfig(irf_sigma_ps=250.0, efficiency=0.1)
DEFAULT_PULSES = 10 ** 7


def simulate_hbt(
    preset: QdPreset,
    n_pulses: int,
    seed: int,
    detector: DetectorConfig = HBT_DETECTOR,
    channels: Sequence[int] = (0, 1),
    ledger: Optional[PhotonLedger] = None,
) -> TagStream:
    return simulate_tags(
        preset.emitter, preset.circuit, detector, hbt_route(preset.circuit, seed), n_pulses, seed,
        channels=channels, ledger=ledger
    )


def g2_metrics(
    report: ExperimentReport,
    pair: PairCorrelation,
    preset: QdPreset,
    irf_sigma_ps: float,
    n_side_peaks: int = DEFAULT_SIDE_PEAKS,
    prefix: str = "",
):
    r"""
    Add `g2_raw`, `g2_bgc`, the bunching metrics and the number of side-peak coincidences of one channel pair to
    `report`, with their histograms and figures.
    """
    period = preset.circuit.rep_period_ps
    tau = preset.emitter.tau_ps
    report.add_flags(*pair.flags)

    coincidences = pair.side_coincidences
    report.add_metric(f"{prefix}coincidences", Measurement(float(coincidences)))
    if coincidences < MIN_COINCIDENCES:
        rank_zero_warn(f"Only {coincidences} side-peak coincidences, at least {MIN_COINCIDENCES} are needed")
        report.add_flags("low_statistics")

    n_side = pair.usable_side_peaks(n_side_peaks)
    if n_side < n_side_peaks:
        logger.warning("Acquisition covers %d side peaks instead of %d", n_side, n_side_peaks)
        report.add_flags("short_acquisition")
    try:
        report.add_metric(f"{prefix}g2_raw", extract_g2_raw(pair.peaks, pair.bunching, n_side))
    except DomainError as ex:
        logger.warning("Raw g2(0) undefined: %s", ex)
        report.add_metric(f"{prefix}g2_raw", Measurement(float("nan"), float("nan")))

    fit = None
    try:
        fit = fit_g2_background(pair.fine, irf_sigma_ps, period, tau, bunching=pair.bunching)
        report.add_flags(*fit.flags)
        if not fit.converged:
            report.add_flags("fit_not_converged")
        report.add_metric(f"{prefix}g2_bgc", fit["g2_bgc"])
        report.details[f"{prefix}g2_fit"] = fit.to_dict()
    except DomainError as ex:
        logger.warning("Background-corrected g2(0) undefined: %s", ex)
        report.add_metric(f"{prefix}g2_bgc", Measurement(float("nan"), float("nan")))

    bunching = pair.bunching
    report.add_metric(f"{prefix}beta", bunching.beta)
    report.add_metric(f"{prefix}tau_b1_us", bunching.tau_b1_us)
    report.add_metric(f"{prefix}tau_b2_us", bunching.tau_b2_us)
    report.details[f"{prefix}bunching"] = bunching.to_dict()

    report.histograms[f"{prefix}g2_fine"] = pair.fine
    report.histograms[f"{prefix}g2_coarse"] = pair.coarse
    report.figures[f"{prefix}g2_fine"] = fine_figure(
        pair, fit, period, irf_sigma_ps, tau, f"{prefix}g2 near zero delay"
    )
    report.figures[f"{prefix}g2_coarse"] = coarse_figure(pair, f"{prefix}g2 side-peak envelope")
    return fit


def analyze_hbt(
    tags: TagStream,
    preset: QdPreset,
    seed: int = 0,
    detector: DetectorConfig = HBT_DETECTOR,
    n_pulses: Optional[int] = None,
    channels: Sequence[int] = (0, 1),
    n_side_peaks: int = DEFAULT_SIDE_PEAKS,
    fine_bin_ps: int = FINE_BIN_PS,
    coarse_range_ps: int = COARSE_RANGE_PS,
    threads: Optional[int] = None,
) -> ExperimentReport:
    r"""
    Correlate two channels of `tags` and extract `g2_raw`, `g2_bgc`, `beta` and the bunching timescales.
    `preset` supplies the laser period, the lifetime used as peak shape and the expected metrics; `detector`
    the timing jitter.
    """
    report = start_report("hbt", preset, seed, detector, n_pulses=n_pulses, channels=list(channels),
                          n_side_peaks=n_side_peaks, fine_bin_ps=fine_bin_ps)
    period = preset.circuit.rep_period_ps
    duration = acquisition_duration(tags, period, n_pulses)
    pair = correlate_pair(
        tags.channel(channels[0]), tags.channel(channels[1]), period, duration, fine_bin_ps=fine_bin_ps,
        max_range_ps=coarse_range_ps, threads=threads, dead_time_ps=detector.dead_time_ps
    )
    g2_metrics(report, pair, preset, detector.irf_sigma_ps, n_side_peaks)
    report.check_against(preset.expected)
    logger.info("HBT on %s: g2_raw=%s, g2_bgc=%s", preset.name, report.metrics["g2_raw"].value,
                report.metrics["g2_bgc"].value)
    return report


def run_hbt(preset: QdPreset, n_pulses: int = DEFAULT_PULSES, seed: int = 0, detector: DetectorConfig = HBT_DETECTOR,
            threads: Optional[int] = None) -> ExperimentReport:
    r"""
    Simulate the splitter outputs on two detectors and analyze them.

    >>> report = run_hbt(get_preset("qd1"), n_pulses=10 ** 8, seed=7)
    >>> report.metric("g2_raw")
    """
    tags = simulate_hbt(preset, n_pulses, seed, detector=detector)
    return analyze_hbt(tags, preset, seed, detector=detector, n_pulses=n_pulses, threads=threads)


class HbtExperiment(SuperExperiment):

    name = "hbt"
    uses_tags = True
    default_detector = HBT_DETECTOR

    def simulate(self) -> TagStream:
        return simulate_hbt(self.preset, self.pulses(DEFAULT_PULSES), self.seed, detector=self.detector)

    def analyze(self, data: TagStream) -> ExperimentReport:
        return analyze_hbt(
            data,
            self.preset,
            self.seed,
            detector=self.detector,
            n_pulses=self.option("n_pulses"),
            n_side_peaks=self.option("n_side_peaks", DEFAULT_SIDE_PEAKS),
            threads=self.threads,
        )

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument(
            '--n-side-peaks',
            type=int,
            required=False,
            default=None,
            help='Side peaks averaged for the Poisson level, half on each side of zero delay'
        )

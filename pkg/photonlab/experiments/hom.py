r"""
Two-photon interference of consecutive photons: the MMI outputs meet again on a fiber beamsplitter after the
long arm is delayed by one laser period. The co- and cross-polarized correlations give the raw visibility,
corrected to the wave-packet indistinguishability with the `g2(0)` of a splitter-only reference run.
"""
import logging
from argparse import ArgumentParser
from typing import Dict, Optional, Tuple

from photonlab.analysis.g2 import DEFAULT_SIDE_PEAKS, comb_g2
from photonlab.analysis.visibility import VtpiInputs, correct_vtpi, extract_vtpi_raw
from photonlab.core.configs import DetectorConfig
from photonlab.core.exceptions import DomainError
from photonlab.core.random import StreamKind, derive_seed
from photonlab.core.types import Measurement, TagStream
from photonlab.experiments.correlation import PairCorrelation, acquisition_duration, correlate_pair
from photonlab.experiments.hbt import DEFAULT_PULSES, HBT_DETECTOR, g2_metrics
from photonlab.experiments.presets import QdPreset
from photonlab.experiments.report import ExperimentReport
from photonlab.experiments.simulation import hbt_route, hom_route, simulate_tags
from photonlab.experiments.super_experiment import SuperExperiment, start_report

logger = logging.getLogger(__name__)

POL_CONFIGS = ("co", "cross", "both")
HOM_CHANNELS = dict(co=(0, 1), cross=(2, 3), reference=(4, 5))
# sub-run index of each acquisition in the seed derivation
_SUBRUNS = dict(co=0, cross=1, reference=2)


def _acquisitions(pol_config: str) -> Tuple[str, ...]:
    if pol_config not in POL_CONFIGS:
        raise ValueError(f"Polarization configuration must be one of {POL_CONFIGS}, found {pol_config}")
    return ("co", "cross") if pol_config == "both" else (pol_config, )


def simulate_hom(
    preset: QdPreset,
    pol_config: str,
    n_pulses: int,
    seed: int,
    detector: DetectorConfig = HBT_DETECTOR,
    overlap_override=None,
    reference: bool = True,
) -> TagStream:
    r"""
    Tags of every requested polarization on the channels of `HOM_CHANNELS`, plus a splitter-only reference
    acquisition on channels 4 and 5 for the `g2(0)` of the source.

    Each acquisition is an independent run of `n_pulses` with its own seed derived from `seed`.
    """
    streams = []
    for acquisition in _acquisitions(pol_config) + (("reference", ) if reference else ()):
        subrun_seed = derive_seed(seed, StreamKind.SUBRUN, _SUBRUNS[acquisition])
        if acquisition == "reference":
            circuit = preset.circuit
            route = hbt_route(circuit, subrun_seed)
        else:
            circuit = preset.circuit.model_copy(update=dict(pol_config=acquisition))
            route = hom_route(circuit, subrun_seed, overlap_override=overlap_override)
        streams.append(
            simulate_tags(
                preset.emitter, circuit, detector, route, n_pulses, subrun_seed, channels=HOM_CHANNELS[acquisition]
            )
        )
    return TagStream.merge(*streams)


def analyze_hom(
    tags: TagStream,
    preset: QdPreset,
    seed: int = 0,
    detector: DetectorConfig = HBT_DETECTOR,
    n_pulses: Optional[int] = None,
    n_side_peaks: int = DEFAULT_SIDE_PEAKS,
    g2_0: Optional[float] = None,
    threads: Optional[int] = None,
) -> ExperimentReport:
    r"""
    Raw visibility `v_raw` from the co- and cross-polarized peak areas and the indistinguishability `v_corr`.

    The channels present in `tags` decide what is analyzed (see `HOM_CHANNELS`). Without a reference
    acquisition, `g2_0` gives the `g2(0)` of the source; it defaults to 0.
    """
    period = preset.circuit.rep_period_ps
    duration = acquisition_duration(tags, period, n_pulses)
    present = [name for name, channels in HOM_CHANNELS.items() if set(channels) <= set(tags.channel_ids)]
    report = start_report("hom", preset, seed, detector, n_pulses=n_pulses, n_side_peaks=n_side_peaks,
                          acquisitions=present, g2_0=g2_0)
    if not present:
        raise DomainError(f"Tags hold none of the channel pairs {HOM_CHANNELS}, found channels {tags.channel_ids}")

    pairs: Dict[str, PairCorrelation] = {}
    fits = {}
    for name in present:
        a, b = HOM_CHANNELS[name]
        pairs[name] = correlate_pair(
            tags.channel(a), tags.channel(b), period, duration, threads=threads, dead_time_ps=detector.dead_time_ps
        )
        prefix = "" if name == "reference" else f"{name}_"
        fits[name] = g2_metrics(report, pairs[name], preset, detector.irf_sigma_ps, n_side_peaks, prefix=prefix)

    # the blinking envelope is a property of the source, best seen without interference
    for source in ("reference", "cross", "co"):
        if source in pairs:
            bunching = pairs[source].bunching
            break

    if "co" in pairs and "cross" in pairs:
        n_side = min(pairs["co"].usable_side_peaks(n_side_peaks), pairs["cross"].usable_side_peaks(n_side_peaks))
        try:
            report.add_metric("v_raw", extract_vtpi_raw(pairs["co"].peaks, pairs["cross"].peaks, bunching, n_side))
        except DomainError as ex:
            logger.warning("Raw visibility undefined: %s", ex)
            report.add_metric("v_raw", Measurement(float("nan"), float("nan")))
        _correct(report, fits, bunching, preset, g2_0)

    report.check_against(preset.expected)
    return report


def _correct(report: ExperimentReport, fits: Dict, bunching, preset: QdPreset, g2_0: Optional[float]):
    period = preset.circuit.rep_period_ps
    co, cross = fits.get("co"), fits.get("cross")
    if co is None or cross is None or not co.converged or not cross.converged:
        logger.warning("Interference correction skipped, a peak comb fit is missing")
        report.add_flags("fit_not_converged")
        return

    if g2_0 is not None:
        g2 = Measurement(float(g2_0))
    elif report.metrics.get("g2_bgc") is not None and report.metrics["g2_bgc"].value is not None:
        g2 = Measurement(report.metrics["g2_bgc"].value, report.metrics["g2_bgc"].error or 0.0)
    else:
        g2 = Measurement(0.0)
    try:
        inputs = VtpiInputs(
            g_parallel=comb_g2(co, period, bunching),
            g_perpendicular=comb_g2(cross, period, bunching),
        )
        correction = correct_vtpi(
            inputs,
            g2,
            r_b=preset.circuit.fiber_bs_ratio,
            r_mmi=preset.circuit.mmi_ratio,
            stray_share=1.0 - preset.reexcitation_share,
        )
    except DomainError as ex:
        logger.warning("Interference correction undefined: %s", ex)
        report.add_metric("v_corr", Measurement(float("nan"), float("nan")))
        return
    report.add_flags(*correction.flags)
    report.add_metric("v_corr", correction.indistinguishability)
    report.add_metric("v_bgc", correction.v_raw)
    report.details["correction"] = dict(
        g_parallel=inputs.g_parallel.to_dict(),
        g_perpendicular=inputs.g_perpendicular.to_dict(),
        g2_0=g2.to_dict(),
        flags=list(correction.flags),
    )


def run_hom(
    preset: QdPreset,
    pol_config: str = "both",
    n_pulses: int = DEFAULT_PULSES,
    seed: int = 0,
    detector: DetectorConfig = HBT_DETECTOR,
    overlap_override=None,
    threads: Optional[int] = None,
) -> ExperimentReport:
    tags = simulate_hom(preset, pol_config, n_pulses, seed, detector=detector, overlap_override=overlap_override)
    report = analyze_hom(tags, preset, seed, detector=detector, n_pulses=n_pulses, threads=threads)
    if overlap_override is not None and not callable(overlap_override):
        report.config["options"]["overlap_override"] = float(overlap_override)
    return report


class HomExperiment(SuperExperiment):

    name = "hom"
    uses_tags = True
    default_detector = HBT_DETECTOR

    def simulate(self) -> TagStream:
        return simulate_hom(
            self.preset,
            self.option("pol", "both"),
            self.pulses(DEFAULT_PULSES),
            self.seed,
            detector=self.detector,
            overlap_override=self.option("overlap_override"),
        )

    def analyze(self, data: TagStream) -> ExperimentReport:
        return analyze_hom(
            data,
            self.preset,
            self.seed,
            detector=self.detector,
            n_pulses=self.option("n_pulses"),
            n_side_peaks=self.option("n_side_peaks", DEFAULT_SIDE_PEAKS),
            g2_0=self.option("g2_0"),
            threads=self.threads,
        )

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument(
            '--pol', type=str, required=False, default=None, choices=POL_CONFIGS, help='Polarization configuration'
        )
        parser.add_argument(
            '--overlap-override',
            type=float,
            required=False,
            default=None,
            help='Force the overlap of every interfering emitter pair'
        )
        parser.add_argument(
            '--g2-0', type=float, required=False, default=None, help='g2(0) of the source when tags hold no reference'
        )

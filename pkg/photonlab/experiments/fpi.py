r"""
High-resolution spectroscopy: the emission is filtered by a scanning Fabry-Pérot interferometer and the transmitted
counts are recorded at each detuning of its resonance.

The interferometer resolution (a Lorentzian of 0.2 GHz FWHM) is not a measured quantity of the setup; it adds to
the Lorentzian part of the fitted line and is removed again from the reported emitter linewidth.
"""
import logging
from argparse import ArgumentParser

import numpy as np
from pytorch_lightning.utilities.rank_zero import rank_zero_warn

from photonlab.analysis.models import lorentzian, voigt_line
from photonlab.analysis.spectroscopy import SpectralScan, fit_voigt_fixed_lorentzian
from photonlab.core.functional import (
    GAUSSIAN_FWHM_FACTOR,
    PS_PER_S,
    VOIGT_C2,
    fourier_limit,
    voigt_fwhm,
)
from photonlab.core.random import StreamKind, rng_stream
from photonlab.core.types import Measurement
from photonlab.emitter.blinking import stationary_on_fraction
from photonlab.emitter.spectral import initial_spectral_state, ou_series
from photonlab.experiments.presets import QdPreset
from photonlab.experiments.report import ExperimentReport
from photonlab.experiments.super_experiment import SuperExperiment, start_report
from photonlab.utils.plotting import HistogramFigure

logger = logging.getLogger(__name__)

FPI_RESOLUTION_GHZ = 0.2
FPI_EFFICIENCY = 0.05
FPI_DARK_RATE_HZ = 50.0
DEFAULT_SCAN_RANGE_GHZ = 30.0
DEFAULT_STEP_GHZ = 0.25
DEFAULT_DWELL_PULSES = 10 ** 5


def expected_linewidth(preset: QdPreset) -> float:
    r""" FWHM (GHz) of the emitter line: the Fourier limit broadened by the spectral diffusion. """
    emitter = preset.emitter
    return voigt_fwhm(fourier_limit(emitter.tau_ps), emitter.sigma_g_ghz * GAUSSIAN_FWHM_FACTOR)


def simulate_fpi(
    preset: QdPreset,
    scan_range_ghz: float = DEFAULT_SCAN_RANGE_GHZ,
    step_ghz: float = DEFAULT_STEP_GHZ,
    dwell_pulses: int = DEFAULT_DWELL_PULSES,
    seed: int = 0,
    resolution_ghz: float = FPI_RESOLUTION_GHZ,
    efficiency: float = FPI_EFFICIENCY,
    dark_rate_hz: float = FPI_DARK_RATE_HZ,
) -> SpectralScan:
    r"""
    Counts behind the interferometer at detunings spanning `scan_range_ghz` around the emitter line.

    At every point the emitter detuning follows its own diffusion path over the `dwell_pulses` pulses; each
    photon passes with the interferometer transmission for its Lorentzian line (natural plus instrument width)
    centered on that detuning. Counts are Poissonian, with dark counts on top.
    """
    if scan_range_ghz <= 0 or step_ghz <= 0 or dwell_pulses < 1:
        raise ValueError(f"Scan range, step and dwell must be positive, found {scan_range_ghz}, {step_ghz}, "
                         f"{dwell_pulses}")
    linewidth = expected_linewidth(preset)
    if step_ghz > linewidth / 5:
        rank_zero_warn(f"Scan step {step_ghz} GHz is coarser than a fifth of the {linewidth:.3g} GHz linewidth")

    emitter, circuit = preset.emitter, preset.circuit
    f_l = fourier_limit(emitter.tau_ps) + resolution_ghz
    # photons per pulse at the peak of a transmission without diffusion
    photons = stationary_on_fraction(emitter.blink) * emitter.prep_fidelity * (1.0 + emitter.p_reexcite)
    peak_rate = photons * efficiency * resolution_ghz / f_l
    dark = dark_rate_hz * circuit.rep_period_ps / PS_PER_S

    detuning = np.arange(-scan_range_ghz / 2, scan_range_ghz / 2 + step_ghz / 2, step_ghz)
    counts = np.zeros(len(detuning))
    for i, f in enumerate(detuning):
        rng = rng_stream(seed, StreamKind.SCAN, i)
        if emitter.sigma_g_ghz > 0:
            start = initial_spectral_state(emitter.sigma_g_ghz, rng).detuning
            path = ou_series(start, dwell_pulses, circuit.rep_period_ps, emitter.sigma_g_ghz, emitter.ou_tc_us, rng)
            transmitted = float(np.mean(lorentzian(f, f_l, center=path)))
        else:
            transmitted = float(lorentzian(f, f_l))
        counts[i] = rng.poisson(dwell_pulses * (peak_rate * transmitted + dark))
    logger.debug("FPI scan of %d points, peak %.0f counts", len(detuning), counts.max())
    return SpectralScan(detuning, counts, dwell_pulses)


def analyze_fpi(
    scan: SpectralScan,
    preset: QdPreset,
    seed: int = 0,
    resolution_ghz: float = FPI_RESOLUTION_GHZ,
) -> ExperimentReport:
    r"""
    Fit the scan with a Voigt line whose Lorentzian part is the Fourier limit plus the instrument resolution, and
    report the emitter `linewidth_ghz`, its Gaussian part `sigma_g_ghz` and the ratio to the Fourier limit.
    """
    report = start_report("fpi", preset, seed, dwell_pulses=scan.dwell_pulses, resolution_ghz=resolution_ghz,
                          points=len(scan.counts), span_ghz=scan.span_ghz)
    f_fourier = fourier_limit(preset.emitter.tau_ps)
    fit = fit_voigt_fixed_lorentzian(scan, f_fourier + resolution_ghz)
    report.add_flags(*fit.flags)
    if not fit.converged:
        report.add_flags("fit_not_converged")
    report.details["voigt_fit"] = fit.to_dict()

    f_g = fit["f_g"]
    linewidth = voigt_fwhm(f_fourier, max(f_g.value, 0.0)) if np.isfinite(f_g.value) else float("nan")
    slope = f_g.value / np.sqrt(VOIGT_C2 * f_fourier ** 2 + f_g.value ** 2) if f_g.value > 0 else 0.0
    report.add_metric("linewidth_ghz", Measurement(linewidth, abs(slope) * f_g.error))
    report.add_metric("measured_fwhm_ghz", fit["fwhm"])
    report.add_metric("sigma_g_ghz", Measurement(f_g.value / GAUSSIAN_FWHM_FACTOR, f_g.error / GAUSSIAN_FWHM_FACTOR))
    report.add_metric("fourier_ratio", Measurement(linewidth / f_fourier, abs(slope) * f_g.error / f_fourier))

    curve = None
    if fit.converged:
        values = fit.values()
        grid = np.linspace(scan.detuning_ghz.min(), scan.detuning_ghz.max(), 10 * len(scan.counts))
        curve = (grid, voigt_line(grid, values["amplitude"], values["center"], f_fourier + resolution_ghz,
                                  values["f_g"]) + values["background"])
    report.figures["fpi"] = HistogramFigure(scan.detuning_ghz, scan.counts, fit=curve, xlabel="detuning (GHz)",
                                            ylabel="counts", title="Fabry-Pérot scan")
    report.histograms["fpi"] = scan
    report.check_against(preset.expected)
    logger.info("FPI on %s: linewidth %.4g GHz", preset.name, linewidth)
    return report


def run_fpi(
    preset: QdPreset,
    scan_range_ghz: float = DEFAULT_SCAN_RANGE_GHZ,
    step_ghz: float = DEFAULT_STEP_GHZ,
    dwell_pulses: int = DEFAULT_DWELL_PULSES,
    seed: int = 0,
) -> ExperimentReport:
    scan = simulate_fpi(preset, scan_range_ghz, step_ghz, dwell_pulses, seed)
    return analyze_fpi(scan, preset, seed)


class FpiExperiment(SuperExperiment):

    name = "fpi"

    def simulate(self) -> SpectralScan:
        return simulate_fpi(
            self.preset,
            scan_range_ghz=self.option("scan_range_ghz", DEFAULT_SCAN_RANGE_GHZ),
            step_ghz=self.option("step_ghz", DEFAULT_STEP_GHZ),
            dwell_pulses=self.option("dwell_pulses", DEFAULT_DWELL_PULSES),
            seed=self.seed,
        )

    def analyze(self, data: SpectralScan) -> ExperimentReport:
        return analyze_fpi(data, self.preset, self.seed)

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument('--scan-range-ghz', type=float, required=False, default=None, help='Span of the scan')
        parser.add_argument('--step-ghz', type=float, required=False, default=None, help='Detuning step of the scan')
        parser.add_argument(
            '--dwell-pulses', type=int, required=False, default=None, help='Laser pulses integrated at each point'
        )

r"""
Classical characterization of the chip with laser light: waveguide loss from a cut-back series of straight
waveguides and the splitting ratio and transmission of the MMI.
"""
import logging
import math
from argparse import ArgumentParser
from typing import Optional, Sequence

import numpy as np

from photonlab.analysis.fitting import least_squares_fit, poisson_sigma
from photonlab.analysis.models import exponential_decay, exponential_decay_jac
from photonlab.circuit.elements import attenuate, mmi_split
from photonlab.core.configs import CircuitConfig
from photonlab.core.random import StreamKind, rng_stream
from photonlab.core.types import Measurement, Origin, PhotonStream
from photonlab.experiments.presets import ExpectedMetric
from photonlab.experiments.report import ExperimentReport
from photonlab.experiments.super_experiment import SuperExperiment
from photonlab.utils.plotting import HistogramFigure

logger = logging.getLogger(__name__)

DEFAULT_LENGTHS_MM = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
DEFAULT_PHOTONS = 10 ** 6
COUPLING_EFFICIENCY = 0.3
DB = 10.0 / math.log(10.0)


def _laser_photons(n: int, circuit: CircuitConfig) -> PhotonStream:
    pulse = np.arange(n, dtype=np.int64)
    return PhotonStream(
        t0=pulse * circuit.rep_period_ps,
        tau=np.full(n, circuit.laser_pulse_ps),
        detuning=np.zeros(n),
        polarization=np.zeros(n, dtype=np.int8),
        origin=np.full(n, Origin.STRAY_PULSED),
        pulse=pulse,
    )


def run_attenuation(
    circuit: Optional[CircuitConfig] = None,
    lengths_mm: Sequence[float] = DEFAULT_LENGTHS_MM,
    photons_per_point: int = DEFAULT_PHOTONS,
    seed: int = 0,
    coupling: float = COUPLING_EFFICIENCY,
) -> ExperimentReport:
    r"""
    Transmitted photons through straight waveguides of each length and the propagation loss
    `attenuation_db_per_mm` from an exponential fit. The unknown coupling only scales the fitted amplitude.
    """
    circuit = circuit or CircuitConfig()
    lengths = np.asarray(lengths_mm, dtype=np.float64)
    if len(lengths) < 3:
        raise ValueError(f"A cut-back fit needs at least three lengths, found {len(lengths)}")
    rng = rng_stream(seed, StreamKind.WAVEGUIDE)
    probability = np.array([attenuate(coupling, circuit.attenuation_db_per_mm, length) for length in lengths])
    counts = rng.binomial(photons_per_point, probability).astype(np.float64)

    report = ExperimentReport(
        scenario="attenuation",
        seed=seed,
        config=dict(circuit=circuit.model_dump(mode="json"), options=dict(
            lengths_mm=lengths.tolist(), photons_per_point=photons_per_point, coupling=coupling
        )),
    )
    positive = counts > 0
    slope, intercept = np.polyfit(lengths[positive], np.log(counts[positive]), 1) if positive.sum() >= 2 else (0, 0)
    fit = least_squares_fit(
        exponential_decay,
        lengths,
        counts,
        p0=dict(amplitude=float(np.exp(intercept)), rate=float(-slope)),
        sigma=poisson_sigma(counts),
        jac=exponential_decay_jac,
    )
    if not fit.converged:
        report.add_flags("fit_not_converged")
    rate = fit["rate"]
    report.add_metric("attenuation_db_per_mm", Measurement(rate.value * DB, rate.error * DB))
    report.add_metric("coupling", Measurement(fit.value("amplitude") / photons_per_point,
                                              fit["amplitude"].error / photons_per_point))
    report.details["cutback_fit"] = fit.to_dict()

    grid = np.linspace(0.0, lengths.max(), 100)
    curve = (grid, exponential_decay(grid, fit.value("amplitude"), rate.value)) if fit.converged else None
    report.figures["attenuation"] = HistogramFigure(lengths, counts, fit=curve, xlabel="length (mm)",
                                                    ylabel="transmitted photons", title="cut-back", logy=True)
    report.check_against(dict(attenuation_db_per_mm=ExpectedMetric(
        value=circuit.attenuation_db_per_mm, tolerance=max(5 * rate.error * DB, 0.05 * circuit.attenuation_db_per_mm)
    )))
    logger.info("Cut-back: %s dB/mm", report.metrics["attenuation_db_per_mm"].value)
    return report


def run_mmi_split(circuit: Optional[CircuitConfig] = None, n_photons: int = DEFAULT_PHOTONS,
                  seed: int = 0) -> ExperimentReport:
    r"""
    Photons counted at each MMI output for `n_photons` injected: the split ratio `mmi_ratio` (port 0 share of
    the transmitted photons) and the transmission `mmi_transmission`, both with binomial errors.
    """
    circuit = circuit or CircuitConfig()
    if n_photons < 1:
        raise ValueError(f"Need at least one photon, found {n_photons}")
    routed = mmi_split(_laser_photons(n_photons, circuit), circuit.mmi_ratio, circuit.mmi_transmission,
                       rng_stream(seed, StreamKind.SPLITTER))
    port_0, port_1 = len(routed.output(0)), len(routed.output(1))
    transmitted = port_0 + port_1

    report = ExperimentReport(
        scenario="mmi_split",
        seed=seed,
        config=dict(circuit=circuit.model_dump(mode="json"), options=dict(n_photons=n_photons)),
    )
    report.add_metric("port_0", Measurement(float(port_0)))
    report.add_metric("port_1", Measurement(float(port_1)))
    eta = transmitted / n_photons
    report.add_metric("mmi_transmission", Measurement(eta, math.sqrt(eta * (1 - eta) / n_photons)))
    if transmitted:
        ratio = port_0 / transmitted
        report.add_metric("mmi_ratio", Measurement(ratio, math.sqrt(ratio * (1 - ratio) / transmitted)))
    else:
        report.add_flags("low_statistics")
        report.add_metric("mmi_ratio", Measurement(float("nan"), float("nan")))

    expected = dict(
        mmi_ratio=ExpectedMetric(value=circuit.mmi_ratio, tolerance=0.01),
        mmi_transmission=ExpectedMetric(value=circuit.mmi_transmission, tolerance=0.01),
    )
    report.check_against(expected)
    return report


class _ChipExperiment(SuperExperiment):

    def simulate(self) -> CircuitConfig:
        return self.preset.circuit


class AttenuationExperiment(_ChipExperiment):

    name = "attenuation"

    def analyze(self, data: CircuitConfig) -> ExperimentReport:
        return run_attenuation(data, photons_per_point=self.option("n_photons", DEFAULT_PHOTONS), seed=self.seed)

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument('--n-photons', type=int, required=False, default=None, help='Photons injected per length')


class MmiSplitExperiment(_ChipExperiment):

    name = "mmi_split"

    def analyze(self, data: CircuitConfig) -> ExperimentReport:
        return run_mmi_split(data, n_photons=self.option("n_photons", DEFAULT_PHOTONS), seed=self.seed)

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument('--n-photons', type=int, required=False, default=None, help='Photons injected')

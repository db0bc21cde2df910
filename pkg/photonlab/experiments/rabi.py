r"""
Power sweep under resonant excitation: integrated intensity against laser power and the preparation fidelity
read from the damping of the Rabi oscillation.
"""
import logging
import math
from argparse import ArgumentParser

import numpy as np

from photonlab.analysis.models import rabi_curve
from photonlab.analysis.rabi import RabiSweep, fit_rabi
from photonlab.core.random import StreamKind, rng_stream
from photonlab.emitter.blinking import stationary_on_fraction
from photonlab.emitter.rabi import rabi_excitation_prob
from photonlab.experiments.presets import QdPreset
from photonlab.experiments.report import ExperimentReport
from photonlab.experiments.super_experiment import SuperExperiment, start_report
from photonlab.utils.plotting import HistogramFigure

logger = logging.getLogger(__name__)

RABI_EFFICIENCY = 0.05
MAX_PULSE_AREA = 3.5 * math.pi
DEFAULT_POINTS = 50
DEFAULT_PULSES_PER_POINT = 10 ** 5


def simulate_rabi(
    preset: QdPreset,
    power_points: int = DEFAULT_POINTS,
    pulses_per_point: int = DEFAULT_PULSES_PER_POINT,
    seed: int = 0,
    max_area: float = MAX_PULSE_AREA,
    efficiency: float = RABI_EFFICIENCY,
) -> RabiSweep:
    r"""
    Detected counts at `power_points` powers whose pulse areas are evenly spaced up to `max_area`, in units of
    the pi-pulse power. Each pulse gives a click with the excitation probability times the on-time fraction and
    `efficiency`.
    """
    if power_points < 1 or pulses_per_point < 1:
        raise ValueError(f"Need at least one point and one pulse, found {power_points} and {pulses_per_point}")
    area = np.linspace(0.0, max_area, power_points)
    probability = rabi_excitation_prob(area, prep_fidelity=preset.emitter.prep_fidelity)
    click = np.clip(stationary_on_fraction(preset.emitter.blink) * efficiency * probability, 0.0, 1.0)
    counts = rng_stream(seed, StreamKind.SWEEP).binomial(pulses_per_point, click)
    return RabiSweep(power=(area / math.pi) ** 2, counts=counts, pulses=pulses_per_point)


def analyze_rabi(sweep: RabiSweep, preset: QdPreset, seed: int = 0) -> ExperimentReport:
    report = start_report("rabi", preset, seed, points=len(sweep.counts), pulses_per_point=sweep.pulses)
    fit = fit_rabi(sweep)
    report.add_flags(*fit.flags)
    if not fit.converged:
        report.add_flags("fit_not_converged")
    report.add_metric("prep_fidelity", fit["prep_fidelity"])
    report.add_metric("pi_power", fit["pi_power"])
    report.add_metric("damping", fit["damping"])
    report.details["rabi_fit"] = fit.to_dict()

    curve = None
    if fit.converged:
        grid = np.linspace(0.0, sweep.power.max(), 20 * len(sweep.counts))
        values = fit.values()
        curve = (grid, rabi_curve(grid, values["amplitude"], values["damping"], values["pi_power"]))
    report.histograms["rabi"] = sweep
    report.figures["rabi"] = HistogramFigure(sweep.power, sweep.counts, fit=curve, xlabel="power (P_pi)",
                                             ylabel="counts", title="Rabi oscillation")
    report.check_against(preset.expected)
    logger.info("Rabi sweep on %s: fidelity %s", preset.name, fit["prep_fidelity"])
    return report


def run_rabi(
    preset: QdPreset,
    power_points: int = DEFAULT_POINTS,
    pulses_per_point: int = DEFAULT_PULSES_PER_POINT,
    seed: int = 0,
) -> ExperimentReport:
    sweep = simulate_rabi(preset, power_points, pulses_per_point, seed)
    return analyze_rabi(sweep, preset, seed)


class RabiExperiment(SuperExperiment):

    name = "rabi"

    def simulate(self) -> RabiSweep:
        return simulate_rabi(
            self.preset,
            power_points=self.option("power_points", DEFAULT_POINTS),
            pulses_per_point=self.option("pulses_per_point", DEFAULT_PULSES_PER_POINT),
            seed=self.seed,
        )

    def analyze(self, data: RabiSweep) -> ExperimentReport:
        return analyze_rabi(data, self.preset, self.seed)

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument('--power-points', type=int, required=False, default=None, help='Points of the sweep')
        parser.add_argument(
            '--pulses-per-point', type=int, required=False, default=None, help='Laser pulses integrated per point'
        )

r"""
Statistics over many emitters of the same sample: emission wavelength, decay time and linewidth, each drawn from a
normal distribution.
"""
import logging
import math
from argparse import ArgumentParser
from typing import Dict, Optional

import numpy as np
from pydantic import Field
from scipy.stats import norm

from photonlab.analysis.ensemble import ensemble_stats
from photonlab.core.configs import FrozenModel
from photonlab.core.exceptions import DomainError
from photonlab.core.functional import fourier_limit, linewidth_to_fourier_ratio
from photonlab.core.random import StreamKind, rng_stream
from photonlab.core.types import Measurement
from photonlab.experiments.presets import ExpectedMetric
from photonlab.experiments.report import ExperimentReport
from photonlab.experiments.super_experiment import SuperExperiment
from photonlab.utils.plotting import EnsembleFigure

logger = logging.getLogger(__name__)

# means within one standard error pass, 0.35 nm for the wavelength ensemble
MEAN_TOLERANCE_SEM = 1.0


class NormalDistribution(FrozenModel):
    mean: float
    std: float = Field(ge=0.0)
    n: int = Field(ge=1)
    unit: str = ""

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        r""" Stratified draws: one value from each of `n` equal-probability slices, in random order. """
        if self.std == 0:
            return np.full(self.n, self.mean)
        quantiles = (np.arange(self.n) + rng.random(self.n)) / self.n
        return rng.permutation(norm.ppf(quantiles, loc=self.mean, scale=self.std))


DEFAULT_DISTRIBUTIONS = dict(
    wavelength_nm=NormalDistribution(mean=781.71, std=3.53, n=104, unit="nm"),
    tau_ps=NormalDistribution(mean=183.0, std=22.0, n=25, unit="ps"),
    linewidth_ghz=NormalDistribution(mean=6.73, std=1.77, n=25, unit="GHz"),
)


def run_ensemble(
    n_qds: Optional[int] = None,
    distribution_params: Optional[Dict[str, NormalDistribution]] = None,
    seed: int = 0,
) -> ExperimentReport:
    r"""
    Sample every property of `distribution_params` (by default wavelength, decay time and linewidth) and report
    its mean, with the standard error, and its sample standard deviation.

    Args:
        n_qds: number of emitters of every property, overriding the per-property `n`
        distribution_params: `NormalDistribution` (or a dict of its fields) by property name
        seed: seed of the sampling

    With both decay time and linewidth present, the ratio of the mean linewidth to the Fourier limit of the mean
    decay time is reported as `fourier_ratio`.
    """
    distributions = {
        name: value if isinstance(value, NormalDistribution) else NormalDistribution(**value)
        for name, value in (distribution_params or DEFAULT_DISTRIBUTIONS).items()
    }
    if n_qds is not None:
        if n_qds < 2:
            raise DomainError(f"Ensemble statistics need at least two emitters, found {n_qds}")
        distributions = {name: dist.model_copy(update=dict(n=n_qds)) for name, dist in distributions.items()}

    report = ExperimentReport(
        scenario="ensemble",
        seed=seed,
        config=dict(distributions={name: dist.model_dump() for name, dist in distributions.items()}),
    )
    expected = {}
    histograms = {}
    for index, (name, dist) in enumerate(sorted(distributions.items())):
        values = dist.sample(rng_stream(seed, StreamKind.ENSEMBLE, index))
        stats = ensemble_stats(values)
        report.add_metric(f"{name}_mean", stats.mean)
        report.add_metric(f"{name}_std", Measurement(stats.std, stats.std / math.sqrt(2 * (stats.n - 1))))
        expected[f"{name}_mean"] = ExpectedMetric(
            value=dist.mean, error=stats.mean.error, tolerance=MEAN_TOLERANCE_SEM * dist.std / math.sqrt(dist.n)
        )
        report.details[name] = stats.to_dict()
        report.histograms[f"ensemble_{name}"] = stats
        histograms[name] = stats.to_dict()

    if "tau_ps" in distributions and "linewidth_ghz" in distributions:
        tau, linewidth = report.metric("tau_ps_mean"), report.metric("linewidth_ghz_mean")
        ratio = linewidth_to_fourier_ratio(linewidth, tau)
        error = ratio * math.hypot(report.metrics["linewidth_ghz_mean"].error / linewidth,
                                   report.metrics["tau_ps_mean"].error / tau)
        report.add_metric("fourier_ratio", Measurement(ratio, error))
        report.details["fourier_limit_ghz"] = fourier_limit(tau)

    report.figures["ensemble"] = EnsembleFigure(histograms, {name: dist.unit for name, dist in distributions.items()})
    report.check_against(expected)
    logger.info("Ensemble of %s emitters", {name: dist.n for name, dist in distributions.items()})
    return report


class EnsembleExperiment(SuperExperiment):
    r""" Nothing is simulated per emitter, only the distributions are sampled. """

    name = "ensemble"

    def simulate(self) -> Optional[Dict[str, NormalDistribution]]:
        return self.option("distributions")

    def analyze(self, data: Optional[Dict[str, NormalDistribution]]) -> ExperimentReport:
        return run_ensemble(self.option("n_qds"), data, self.seed)

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument(
            '--n-qds', type=int, required=False, default=None, help='Emitters per property, overriding the defaults'
        )

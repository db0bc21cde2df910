r"""
Blinking signature from the long-range, period-binned correlation: side-peak envelope with one or two exponential
components and the on-time fraction derived from it.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from photonlab.analysis.fitting import least_squares_fit, poisson_sigma, propagate
from photonlab.analysis.models import bunching_envelope, bunching_envelope_jac
from photonlab.core.exceptions import DomainError
from photonlab.core.functional import PS_PER_US
from photonlab.core.types import FitResult, Measurement
from photonlab.correlator.histogram import CorrelationHistogram
from photonlab.emitter.blinking import BunchingParameters

logger = logging.getLogger(__name__)

MIN_SIDE_BINS = 100
# a second component must lower the reduced chi-square by this fraction to be kept
CHI2_IMPROVEMENT = 1e-3


@dataclass(frozen=True)
class BunchingFit:
    r"""
    Fitted side-peak envelope `p_inf (1 + a1 exp(-|t|/tau_b1) + a2 exp(-|t|/tau_b2))` with `tau_b1 <= tau_b2`
    and the derived on-time fraction `beta = 1 / (1 + a1 + a2)`. A single-component fit has `a2 = 0` and
    `tau_b2 = tau_b1`.
    """

    a1: Measurement
    tau_b1_us: Measurement
    a2: Measurement
    tau_b2_us: Measurement
    beta: Measurement
    p_inf: Measurement
    n_components: int
    fit: FitResult

    @classmethod
    def flat(cls) -> "BunchingFit":
        r""" Envelope of a source that does not blink. """
        zero, inf = Measurement(0.0), Measurement(float("inf"))
        return cls(zero, inf, zero, inf, Measurement(1.0), Measurement(float("nan")), 0,
                   FitResult(params={}, chi2_reduced=float("nan"), converged=True, n_points=0))

    def envelope(self, delay_ps) -> np.ndarray:
        r""" Normalized envelope at the given delays, 1 far from zero delay. """
        return self.to_parameters().envelope(delay_ps)

    def to_parameters(self) -> BunchingParameters:
        return BunchingParameters(
            beta=self.beta.value,
            tau_b1_us=self.tau_b1_us.value,
            tau_b2_us=self.tau_b2_us.value,
            a1=self.a1.value,
            a2=self.a2.value,
        )

    def to_dict(self):
        return dict(
            a1=self.a1.to_dict(),
            tau_b1_us=self.tau_b1_us.to_dict(),
            a2=self.a2.to_dict(),
            tau_b2_us=self.tau_b2_us.to_dict(),
            beta=self.beta.to_dict(),
            n_components=self.n_components,
            converged=self.fit.converged,
            flags=list(self.fit.flags),
        )


def _initial_guess(t_us: np.ndarray, counts: np.ndarray):
    r""" Far level, total excess amplitude and the 1/e delay of the excess. """
    order = np.argsort(t_us)
    t_us, counts = t_us[order], counts[order]
    tail = max(len(counts) // 5, 1)
    p_inf = max(float(np.mean(counts[-tail:])), 1e-12)
    head = max(len(counts) // 100, 1)
    excess = max(float(np.mean(counts[:head])) / p_inf - 1.0, 0.0)

    # smooth before looking for the 1/e crossing
    window = max(len(counts) // 200, 1)
    smooth = np.convolve(counts / p_inf - 1.0, np.ones(window) / window, mode="same")
    below = np.nonzero(smooth < excess / np.e)[0]
    tau = float(t_us[below[0]]) if len(below) and t_us[below[0]] > 0 else float(t_us[-1]) / 5
    return p_inf, excess, max(tau, float(t_us[1] - t_us[0]) if len(t_us) > 1 else 1.0)


def _single(t_us, counts, sigma, p_inf, excess, tau) -> FitResult:
    return least_squares_fit(
        bunching_envelope,
        t_us,
        counts,
        p0=dict(p_inf=p_inf, a1=excess, tau1=tau),
        sigma=sigma,
        jac=bunching_envelope_jac,
        bounds=dict(p_inf=(0.0, np.inf), a1=(0.0, np.inf), tau1=(1e-6, np.inf)),
    )


def _double(t_us, counts, sigma, p_inf, excess, tau) -> FitResult:
    return least_squares_fit(
        bunching_envelope,
        t_us,
        counts,
        p0=dict(p_inf=p_inf, a1=excess / 2, tau1=tau / 2, a2=excess / 2, tau2=tau * 2),
        sigma=sigma,
        jac=bunching_envelope_jac,
        bounds=dict(
            p_inf=(0.0, np.inf), a1=(0.0, np.inf), tau1=(1e-6, np.inf), a2=(0.0, np.inf), tau2=(1e-6, np.inf)
        ),
    )


def _beta(fit: FitResult, amplitudes) -> Measurement:
    a = sum(fit.value(name) for name in amplitudes)
    beta = 1.0 / (1.0 + a)
    # d beta / d a_i = -beta^2 for every amplitude, zero for the other parameters
    names = list(fit.params)
    gradient = np.array([-beta ** 2 if name in amplitudes else 0.0 for name in names])
    return Measurement(beta, propagate(gradient, fit.covariance))


def _is_degenerate(fit: FitResult) -> bool:
    if not fit.converged:
        return True
    # NaN errors compare false and count as not significant
    if not all(fit[name].value > 2 * fit[name].error for name in ("a1", "a2")):
        return True
    tau1, tau2 = fit.value("tau1"), fit.value("tau2")
    return abs(tau1 - tau2) < 0.05 * max(tau1, tau2)


def fit_bunching(hist: CorrelationHistogram, period_ps: Optional[int] = None, exclude_ps: int = 0) -> BunchingFit:
    r"""
    Fit the bunching envelope to a correlation binned at the laser period, leaving out the zero-delay bin and the
    bins within `exclude_ps` of it.

    Both a one- and a two-component model are fitted. The second component is kept only when both amplitudes
    are significant, its timescales are distinct and the reduced chi-square improves; otherwise the fit collapses
    to the single exponential with `a2 = 0`.

    Args:
        hist: correlation with bins centered on multiples of the period (see `coarse_correlate`)
        period_ps: laser period, defaults to the histogram bin width
        exclude_ps: delays up to which detector dead time shapes the correlation, usually the dead time
    """
    period_ps = period_ps or hist.bin_ps
    if period_ps != hist.bin_ps:
        raise DomainError(
            f"Bunching fits need bins of one period, found bin {hist.bin_ps} ps for period {period_ps} ps"
        )

    side = (hist.delays != 0) & (np.abs(hist.delays) > exclude_ps)
    t_us = hist.delays[side] / PS_PER_US
    counts = hist.counts[side].astype(np.float64)
    # a finite acquisition offers fewer pairs at long delays
    overlap = 1.0 - np.abs(hist.delays[side]) / hist.duration_ps if hist.duration_ps > 0 else np.ones(len(counts))
    if np.any(overlap <= 0):
        raise DomainError(f"Correlation range {hist.range_ps} ps exceeds the acquisition of {hist.duration_ps} ps")
    if counts.sum() == 0:
        raise DomainError("Cannot fit bunching to a histogram without side-peak coincidences")

    flags = ()
    if len(counts) < MIN_SIDE_BINS:
        logger.warning("Only %d side-peak bins, the bunching fit needs at least %d", len(counts), MIN_SIDE_BINS)
        flags = ("few_side_peaks", )

    sigma = poisson_sigma(counts) / overlap
    counts = counts / overlap
    p_inf, excess, tau = _initial_guess(np.abs(t_us), counts)
    single = _single(t_us, counts, sigma, p_inf, excess, tau)
    double = _double(t_us, counts, sigma, p_inf, excess, tau)

    two_components = not _is_degenerate(double) and (
        not single.converged or double.chi2_reduced < single.chi2_reduced * (1.0 - CHI2_IMPROVEMENT)
    )

    if two_components:
        fit = double.with_flags(*flags)
        a1, tau1, a2, tau2 = fit["a1"], fit["tau1"], fit["a2"], fit["tau2"]
        if tau1.value > tau2.value:
            a1, tau1, a2, tau2 = a2, tau2, a1, tau1
        beta = _beta(fit, ("a1", "a2"))
        n_components = 2
    else:
        fit = single.with_flags(*flags)
        a1, tau1 = fit["a1"], fit["tau1"]
        a2, tau2 = Measurement(0.0), tau1
        beta = _beta(fit, ("a1", ))
        n_components = 1
        if a1.value <= 2 * a1.error:
            logger.debug("Bunching amplitude %s is not significant", a1)

    if not fit.converged:
        logger.warning("Bunching fit did not converge: %s", fit.message)

    logger.debug("Bunching fit with %d component(s): beta=%s", n_components, beta)
    return BunchingFit(
        a1=a1, tau_b1_us=tau1, a2=a2, tau_b2_us=tau2, beta=beta, p_inf=fit["p_inf"], n_components=n_components,
        fit=fit
    )

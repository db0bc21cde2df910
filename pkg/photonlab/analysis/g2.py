r"""
Second-order correlation at zero delay, from integrated peak areas (raw) and from a fit of the peak comb that
removes the flat coincidence floor (background corrected).
"""
import logging
import math
from typing import Optional

import numpy as np

from photonlab.analysis.fitting import least_squares_fit, poisson_sigma, propagate
from photonlab.analysis.models import two_sided_emg
from photonlab.core.exceptions import DomainError
from photonlab.core.types import FitResult, Measurement
from photonlab.correlator.histogram import CorrelationHistogram
from photonlab.correlator.peaks import PeakAreas

logger = logging.getLogger(__name__)

DEFAULT_SIDE_PEAKS = 114
DEFAULT_COMB_PEAKS = 3


def _envelope(bunching, delays) -> np.ndarray:
    if bunching is None:
        return np.ones(len(delays))
    return np.asarray(bunching.envelope(delays), dtype=np.float64)


def extract_g2_raw(peaks: PeakAreas, bunching=None, n_side_peaks: int = DEFAULT_SIDE_PEAKS) -> Measurement:
    r"""
    Ratio of the central peak area to the mean side-peak area, each side peak first divided by the bunching
    envelope at its delay.

    Args:
        peaks: integrated peak areas
        bunching: a `BunchingFit` or `BunchingParameters`, or None for a source without blinking
        n_side_peaks: number of side peaks averaged, half of them on each side of zero delay

    The error propagates the Poisson noise of the central area and of the side-peak mean.
    """
    if n_side_peaks < 2 or n_side_peaks % 2:
        raise DomainError(f"Side peaks are taken symmetrically, found an odd or too small count {n_side_peaks}")
    indices, areas = peaks.side(n_side_peaks // 2)
    envelope = _envelope(bunching, indices * peaks.period_ps)
    normalized = areas.astype(np.float64) / envelope
    level = float(normalized.mean())
    if level <= 0:
        raise DomainError("All side peaks are empty, the Poisson level is undefined")

    central = float(peaks.central)
    g2 = central / level
    level_var = float(np.sum(areas / envelope ** 2)) / len(areas) ** 2
    error = math.sqrt(max(central, 1.0) / level ** 2 + g2 ** 2 * level_var / level ** 2)
    return Measurement(g2, error)


def _comb_design(delays, bin_ps, period_ps, irf_sigma_ps, tau_ps, orders) -> np.ndarray:
    # jitter of a delay between two independent detectors
    sigma = math.sqrt(2.0) * irf_sigma_ps
    shapes = [bin_ps * two_sided_emg(delays - m * period_ps, tau_ps, sigma) for m in orders]
    return np.stack(shapes + [np.ones(len(delays))], axis=1)


def comb_curve(fit: FitResult, delays, bin_ps: int, period_ps: int, irf_sigma_ps: float, tau_ps: float) -> np.ndarray:
    r""" Expected counts per bin of a `fit_peak_comb` result at the given delays. """
    orders = [int(name[len("area_"):]) for name in fit.params if name.startswith("area_")]
    design = _comb_design(np.asarray(delays, dtype=np.float64), bin_ps, period_ps, irf_sigma_ps, tau_ps, orders)
    return design @ np.array([fit.value(f"area_{m}") for m in orders] + [fit.value("background")])


def fit_peak_comb(
    hist: CorrelationHistogram,
    period_ps: int,
    irf_sigma_ps: float,
    tau_ps: float,
    n_peaks: int = DEFAULT_COMB_PEAKS,
) -> FitResult:
    r"""
    Fit the fine correlation within `+-(n_peaks + 1/2)` periods as a comb of two-sided exponential peaks of
    width `tau_ps`, each convolved with the timing jitter of the two detectors, on top of a flat floor.

    The model is linear in the peak areas `area_<m>` (coincidences, `m` from `-n_peaks` to `n_peaks`) and the
    `background` (coincidences per bin).
    """
    if tau_ps <= 0 or irf_sigma_ps < 0:
        raise DomainError(f"Peak comb needs tau > 0 and a non-negative IRF width, found {tau_ps} and {irf_sigma_ps}")
    half_width = (n_peaks + 0.5) * period_ps
    if hist.range_ps < half_width - hist.bin_ps:
        raise DomainError(f"Histogram range {hist.range_ps} ps does not cover {n_peaks} peaks on each side")
    delays, counts = hist.window(-half_width, half_width)
    delays = delays.astype(np.float64)
    counts = counts.astype(np.float64)

    orders = list(range(-n_peaks, n_peaks + 1))
    design = _comb_design(delays, hist.bin_ps, period_ps, irf_sigma_ps, tau_ps, orders)
    names = [f"area_{m}" for m in orders] + ["background"]

    def model(x, **params):
        return design @ np.array([params[name] for name in names])

    def jac(x, **params):
        return design

    p0 = {f"area_{m}": max(float(counts[np.abs(delays - m * period_ps) <= period_ps / 2].sum()), 1.0) for m in orders}
    p0["background"] = float(np.min(counts))
    fit = least_squares_fit(model, delays, counts, p0=p0, sigma=poisson_sigma(counts), jac=jac)
    if not fit.converged:
        return fit

    # weights from the observed counts pull the floor down by about one count per bin, refit with the model
    expected = design @ np.array([fit.value(name) for name in names])
    refit = least_squares_fit(
        model, delays, counts, p0={name: fit.value(name) for name in names}, sigma=poisson_sigma(expected), jac=jac
    )
    return refit if refit.converged else fit


def comb_g2(fit: FitResult, period_ps: int, bunching=None) -> Measurement:
    r"""
    Background-free ratio of the central peak to the mean of the side peaks of a `fit_peak_comb` result, side peaks
    divided by the bunching envelope. The error follows from the fit covariance.
    """
    # names in the order of the comb fit covariance, derived parameters appended later are left out
    names = [name for name in fit.params if name.startswith("area_") or name == "background"]
    side = [name for name in names if name.startswith("area_") and name != "area_0"]
    orders = np.array([int(name[len("area_"):]) for name in side])
    envelope = _envelope(bunching, orders * period_ps)
    side_areas = np.array([fit.value(name) for name in side]) / envelope
    level = float(side_areas.mean())
    if level <= 0:
        raise DomainError("Fitted side peaks are empty, the Poisson level is undefined")

    central = fit.value("area_0")
    g2 = central / level
    gradient = np.zeros(len(names))
    gradient[names.index("area_0")] = 1.0 / level
    for name, env in zip(side, envelope):
        gradient[names.index(name)] = -g2 / (level * env * len(side))
    return Measurement(g2, propagate(gradient, fit.covariance))


def fit_g2_background(
    hist: CorrelationHistogram,
    irf_sigma_ps: float,
    period_ps: int,
    tau_ps: float,
    bunching=None,
    n_peaks: int = DEFAULT_COMB_PEAKS,
) -> FitResult:
    r"""
    Background-corrected `g2(0)` from a fit of the fine correlation around zero delay (see `fit_peak_comb`).

    Returns:
        the comb fit with an extra `g2_bgc` parameter; a fit that did not converge is returned with
        `converged=False`
    """
    fit = fit_peak_comb(hist, period_ps, irf_sigma_ps, tau_ps, n_peaks=n_peaks)
    if not fit.converged:
        logger.warning("Peak comb fit did not converge: %s", fit.message)
        return fit.with_params(g2_bgc=Measurement(float("nan"), float("nan")))

    g2 = comb_g2(fit, period_ps, bunching=bunching)
    if g2.value < 0:
        fit = fit.with_flags("negative_central_area")
        g2 = Measurement(0.0, g2.error)
    return fit.with_params(g2_bgc=g2)

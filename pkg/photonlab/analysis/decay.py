r"""
Radiative decay time from a start-stop (TCSPC) histogram.
"""
import logging

import numpy as np

from photonlab.analysis.fitting import failed_fit, least_squares_fit, poisson_sigma
from photonlab.analysis.models import emg_cdf
from photonlab.core.exceptions import DomainError
from photonlab.core.types import FitResult, ParamEstimate
from photonlab.correlator.histogram import TcspcHistogram

logger = logging.getLogger(__name__)

DECAY_PARAMS = ("tau", "amplitude", "background", "t0")


def _binned_decay(width: float, sigma: float):

    def model(x, tau, amplitude, background, t0):
        # counts per bin are integrals of the density over the bin, x are the left edges
        return amplitude * (emg_cdf(x + width, tau, sigma, t0) - emg_cdf(x, tau, sigma, t0)) + background

    return model


def fit_decay(hist: TcspcHistogram, irf_sigma_ps: float) -> FitResult:
    r"""
    Fit `A * EMG(t; tau, sigma_irf, t0) + b`, integrated over each bin, with Poisson weights.

    With `irf_sigma_ps = 0` the histogram is a bare exponential: `t0` is pinned to the left edge of the highest
    bin and only bins from there on are fitted.

    Returns:
        a `FitResult` with `tau` (ps), `amplitude` (counts in the decay), `background` (counts per bin) and `t0` (ps)
    """
    if irf_sigma_ps < 0:
        raise DomainError(f"IRF width must be non-negative, found {irf_sigma_ps}")
    counts = hist.counts.astype(np.float64)
    if counts.sum() == 0:
        raise DomainError("Cannot fit a decay to an empty histogram")

    width = float(hist.bin_ps)
    low = hist.start_ps + np.arange(len(counts)) * width
    peak = int(np.argmax(counts))

    background0 = float(np.median(counts[:max(peak // 2, 1)])) if peak > 1 else float(counts.min())
    tail = counts[peak:] - background0
    delays = low[peak:] - low[peak]
    tau0 = float(np.sum(np.clip(tail, 0, None) * delays) / max(np.clip(tail, 0, None).sum(), 1.0)) or width
    amplitude0 = max(float(counts.sum() - background0 * len(counts)), 1.0)

    fixed = {}
    p0 = dict(tau=max(tau0, width / 2), amplitude=amplitude0, background=max(background0, 0.0))
    bounds = dict(tau=(1e-3, np.inf), amplitude=(0.0, np.inf), background=(0.0, np.inf))
    if irf_sigma_ps == 0:
        fixed["t0"] = float(low[peak])
        select = slice(peak, None)
    else:
        p0["t0"] = float(low[peak] + width / 2 - irf_sigma_ps)
        select = slice(None)

    model = _binned_decay(width, float(irf_sigma_ps))
    if len(counts[select]) < len(p0) + 1:
        return failed_fit(DECAY_PARAMS, len(counts[select]), "Too few bins after the peak to fit a decay")

    result = least_squares_fit(
        model,
        low[select],
        counts[select],
        p0=p0,
        sigma=poisson_sigma(counts[select]),
        bounds=bounds,
        fixed=fixed,
    )
    if fixed:
        result = result.with_params(t0=ParamEstimate(fixed["t0"], 0.0))
    logger.debug("Decay fit: tau=%s, chi2_red=%.3g", result["tau"], result.chi2_reduced)
    return result

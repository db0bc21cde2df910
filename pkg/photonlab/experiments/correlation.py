r"""
Correlation steps shared by the scenarios that work on two detector channels: the fine histogram around zero delay,
the period-binned histogram out to milliseconds, its peak areas and the bunching fit.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from photonlab.analysis.bunching import BunchingFit, fit_bunching
from photonlab.analysis.g2 import DEFAULT_COMB_PEAKS, comb_curve
from photonlab.core.exceptions import DomainError
from photonlab.core.functional import PS_PER_NS, PS_PER_US
from photonlab.core.types import FitResult, TagStream
from photonlab.correlator.correlate import coarse_correlate, correlate
from photonlab.correlator.histogram import CorrelationHistogram
from photonlab.correlator.peaks import PeakAreas, peak_areas
from photonlab.utils.plotting import HistogramFigure

logger = logging.getLogger(__name__)

FINE_BIN_PS = 64
COARSE_RANGE_PS = 2_000 * PS_PER_US
MIN_COINCIDENCES = 1_000


@dataclass(frozen=True)
class PairCorrelation:
    fine: CorrelationHistogram
    coarse: CorrelationHistogram
    peaks: PeakAreas
    bunching: BunchingFit
    flags: Tuple[str, ...] = ()

    @property
    def side_coincidences(self) -> int:
        if self.peaks.max_index < 1:
            return 0
        return int(self.peaks.side(self.peaks.max_index)[1].sum())

    def usable_side_peaks(self, n_side_peaks: int) -> int:
        r""" Largest even number of side peaks, at most `n_side_peaks`, inside the correlated range. """
        return min(n_side_peaks, 2 * max(self.peaks.max_index, 0))


def acquisition_duration(tags: TagStream, period_ps: int, n_pulses: Optional[int] = None) -> int:
    r""" Length of the acquisition: `n_pulses` periods when known, otherwise the tags rounded up to a period. """
    if n_pulses:
        return int(n_pulses) * period_ps
    return -(-tags.duration_ps // period_ps) * period_ps


def coarse_range(period_ps: int, duration_ps: int, max_range_ps: int = COARSE_RANGE_PS) -> int:
    r"""
    Range of the period-binned correlation: at most `max_range_ps` and a quarter of the acquisition, ending half a
    period after the last whole peak so that its bin is complete.
    """
    n_peaks = min(max_range_ps, duration_ps // 4) // period_ps
    return int(n_peaks * period_ps + (period_ps - 1) // 2)


def fine_range(period_ps: int, bin_ps: int, n_peaks: int = DEFAULT_COMB_PEAKS) -> int:
    return int(math.ceil((n_peaks + 0.5) * period_ps / bin_ps)) * bin_ps


def correlate_pair(
    times_a: np.ndarray,
    times_b: np.ndarray,
    period_ps: int,
    duration_ps: int,
    fine_bin_ps: int = FINE_BIN_PS,
    max_range_ps: int = COARSE_RANGE_PS,
    threads: Optional[int] = None,
    dead_time_ps: int = 0,
) -> PairCorrelation:
    r"""
    Fine and period-binned correlation of two channels, the peak areas of the latter and its bunching fit.
    Bins within `dead_time_ps` of zero delay stay out of the bunching fit.
    A bunching fit that cannot run (no side-peak coincidences) falls back to a flat envelope with a flag.
    """
    fine = correlate(times_a, times_b, fine_bin_ps, fine_range(period_ps, fine_bin_ps), threads=threads,
                     duration_ps=duration_ps)
    coarse = coarse_correlate(times_a, times_b, period_ps, coarse_range(period_ps, duration_ps, max_range_ps),
                              threads=threads, duration_ps=duration_ps)
    peaks = peak_areas(coarse, period_ps, period_ps)

    flags = []
    try:
        bunching = fit_bunching(coarse, period_ps, exclude_ps=dead_time_ps)
        flags.extend(bunching.fit.flags)
    except DomainError as ex:
        logger.warning("Bunching fit skipped: %s", ex)
        bunching = BunchingFit.flat()
        flags.append("bunching_fit_failed")
    return PairCorrelation(fine, coarse, peaks, bunching, tuple(flags))


def fine_figure(pair: PairCorrelation, fit: Optional[FitResult], period_ps: int, irf_sigma_ps: float,
                tau_ps: float, title: str) -> HistogramFigure:
    delays = pair.fine.delays
    curve = None
    if fit is not None and fit.converged:
        curve = (delays / PS_PER_NS, comb_curve(fit, delays, pair.fine.bin_ps, period_ps, irf_sigma_ps, tau_ps))
    return HistogramFigure(delays / PS_PER_NS, pair.fine.counts, fit=curve, xlabel="delay (ns)", title=title)


def coarse_figure(pair: PairCorrelation, title: str) -> HistogramFigure:
    coarse = pair.coarse
    delays = coarse.delays
    curve = None
    if np.isfinite(pair.bunching.p_inf.value) and coarse.duration_ps > 0:
        overlap = 1.0 - np.abs(delays) / coarse.duration_ps
        curve = (delays / PS_PER_US, pair.bunching.p_inf.value * pair.bunching.envelope(delays) * overlap)
    return HistogramFigure(delays / PS_PER_US, coarse.counts, fit=curve, xlabel="delay (µs)", title=title)

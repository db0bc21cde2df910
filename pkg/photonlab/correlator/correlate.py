r"""
Two-pointer correlation of sorted time-tag streams.

The first stream is cut into chunks that are correlated independently (in threads, the kernel releases the GIL)
and the integer histograms are summed, so the result does not depend on the number of threads.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
from numba import njit

from photonlab.core.exceptions import DomainError, UnsortedTagsError
from photonlab.core.types import first_unsorted_index
from photonlab.correlator.histogram import CorrelationHistogram, half_bins
from photonlab.utils.functional import resolve_threads, split_boundaries

logger = logging.getLogger(__name__)

# chunks per thread, so that threads stay busy when tag density varies
CHUNKS_PER_THREAD = 4


@njit(nogil=True, cache=True)
def _correlate_kernel(a, b, a_start, a_stop, b_start, range_ps, bin_ps, n_half, auto, counts):
    n_b = len(b)
    low = b_start
    for i in range(a_start, a_stop):
        t = a[i]
        while low < n_b and b[low] < t - range_ps:
            low += 1
        k = low
        while k < n_b and b[k] <= t + range_ps:
            if not (auto and k == i):
                d = b[k] - t
                if d >= 0:
                    j = (2 * d + bin_ps) // (2 * bin_ps)
                else:
                    j = -((-2 * d + bin_ps) // (2 * bin_ps))
                counts[j + n_half] += 1
            k += 1


def _as_times(tags, name: str) -> np.ndarray:
    times = np.asarray(tags)
    if times.ndim != 1:
        raise ValueError(f"{name} must be a 1-D array of times, found shape {times.shape}")
    if times.dtype != np.int64:
        times = times.astype(np.int64)
    index = first_unsorted_index(times)
    if index is not None:
        raise UnsortedTagsError(f"{name} is not sorted: tag {index} at {times[index]} ps precedes its predecessor "
                                f"at {times[index - 1]} ps", index)
    return times


def _correlate_chunk(a, b, start, stop, range_ps, bin_ps, n_half, auto):
    counts = np.zeros(2 * n_half + 1, dtype=np.int64)
    if stop > start:
        b_start = int(np.searchsorted(b, a[start] - range_ps, side="left"))
        _correlate_kernel(a, b, start, stop, b_start, range_ps, bin_ps, n_half, auto, counts)
    return counts


def correlate(
    tags_a,
    tags_b,
    bin_ps: int,
    range_ps: int,
    threads: Optional[int] = None,
    auto: Optional[bool] = None,
    duration_ps: int = 0,
) -> CorrelationHistogram:
    r"""
    Histogram of every delay `t_b - t_a` with `|t_b - t_a| <= range_ps`.

    Passing the same array twice (or `auto=True`) correlates a stream with itself, leaving out the pairing of each
    tag with itself. `threads` falls back to the `PHOTONLAB_THREADS` environment variable.
    """
    if bin_ps <= 0 or range_ps < 0:
        raise DomainError(f"Bin width must be positive and range non-negative, found {bin_ps} and {range_ps} ps")
    if auto is None:
        auto = tags_a is tags_b
    a = _as_times(tags_a, "tags_a")
    b = a if auto and tags_a is tags_b else _as_times(tags_b, "tags_b")
    if auto and len(a) != len(b):
        raise ValueError("Auto-correlation needs the same stream on both sides")

    n_half = half_bins(bin_ps, range_ps)
    threads = resolve_threads(threads)
    chunks = split_boundaries(len(a), threads * CHUNKS_PER_THREAD)
    if threads == 1 or len(chunks) <= 1:
        partials = [_correlate_chunk(a, b, start, stop, range_ps, bin_ps, n_half, auto) for start, stop in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            futures = [
                executor.submit(_correlate_chunk, a, b, start, stop, range_ps, bin_ps, n_half, auto)
                for start, stop in chunks
            ]
            partials = [future.result() for future in futures]

    counts = np.zeros(2 * n_half + 1, dtype=np.uint64)
    for partial in partials:
        counts += partial.astype(np.uint64)
    logger.debug("Correlated %d x %d tags into %d bins (%d pairs)", len(a), len(b), len(counts), counts.sum())
    return CorrelationHistogram(bin_ps, range_ps, counts, len(a), len(b), duration_ps)


def coarse_correlate(tags_a, tags_b, period_ps: int, range_ps: int, threads: Optional[int] = None,
                     auto: Optional[bool] = None, duration_ps: int = 0) -> CorrelationHistogram:
    r""" Correlation with one bin per repetition period, bins centered on multiples of the period. """
    if period_ps <= 0:
        raise DomainError(f"Repetition period must be positive, found {period_ps}")
    if auto is None:
        auto = tags_a is tags_b
    return correlate(tags_a, tags_b, period_ps, range_ps, threads=threads, auto=auto, duration_ps=duration_ps)

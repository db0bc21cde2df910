import numpy as np

from photonlab.core.exceptions import DomainError, UnsortedTagsError
from photonlab.core.types import first_unsorted_index
from photonlab.correlator.histogram import TcspcHistogram


def tcspc(tags, trigger_period_ps: int, range_ps: int, bin_ps: int, offset_ps: int = 0) -> TcspcHistogram:
    r"""
    Start-stop histogram of tag times against an ideal trigger at every multiple of `trigger_period_ps`.

    A tag at time `t` lands at `((t + offset_ps) mod period) - offset_ps`, so that the `offset_ps` before each
    trigger (the leading edge of the instrument response) is kept. The histogram covers
    `[-offset_ps, -offset_ps + range_ps)`, clipped to one period.
    """
    if trigger_period_ps <= 0 or bin_ps <= 0 or range_ps <= 0:
        raise DomainError(f"Period, range and bin must be positive, found {trigger_period_ps}, {range_ps}, {bin_ps}")
    if not 0 <= offset_ps < trigger_period_ps:
        raise DomainError(f"Offset must be in [0, period), found {offset_ps}")
    times = np.asarray(tags).astype(np.int64)
    index = first_unsorted_index(times)
    if index is not None:
        raise UnsortedTagsError(f"Tags are not sorted at position {index}", index)

    span = min(range_ps, trigger_period_ps)
    n_bins = -(-span // bin_ps)
    phase = np.mod(times + offset_ps, trigger_period_ps)
    index = phase // bin_ps
    counts = np.bincount(index[(phase < span) & (index < n_bins)], minlength=n_bins)
    return TcspcHistogram(bin_ps=bin_ps, start_ps=-offset_ps, counts=counts[:n_bins], n_tags=len(times))

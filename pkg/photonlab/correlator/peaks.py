from dataclasses import dataclass
from typing import Dict

import numpy as np

from photonlab.core.exceptions import BinningError, DomainError
from photonlab.correlator.histogram import CorrelationHistogram


@dataclass(frozen=True)
class PeakAreas:
    r"""
    Integrated coincidences of each peak of a pulsed correlation: `areas[k]` belongs to `indices[k]`,
    the peak centered at `indices[k] * period_ps`.
    """

    indices: np.ndarray
    areas: np.ndarray
    period_ps: int
    window_ps: int

    @property
    def max_index(self) -> int:
        return int(self.indices.max()) if len(self.indices) else -1

    def area(self, index: int) -> int:
        position = index + self.max_index
        if not 0 <= position < len(self.areas):
            raise DomainError(f"Peak {index} is outside the integrated range (+-{self.max_index})")
        return int(self.areas[position])

    @property
    def central(self) -> int:
        return self.area(0)

    def side(self, n_per_side: int):
        r""" Indices and areas of the `n_per_side` peaks on each side of zero delay. """
        if n_per_side > self.max_index:
            raise DomainError(f"Asked for {n_per_side} side peaks per side, only {self.max_index} integrated")
        mask = (self.indices != 0) & (np.abs(self.indices) <= n_per_side)
        return self.indices[mask], self.areas[mask]

    def to_dict(self) -> Dict[int, int]:
        return {int(i): int(a) for i, a in zip(self.indices, self.areas)}


def peak_areas(hist: CorrelationHistogram, period_ps: int, window_ps: int) -> PeakAreas:
    r"""
    Sum the bins whose centers fall in `[m T - w / 2, m T + w / 2)` for every peak `m` whose window lies inside
    the histogram range.
    """
    if period_ps <= 0 or window_ps <= 0:
        raise BinningError(f"Period and window must be positive, found {period_ps} and {window_ps}")
    if window_ps > period_ps:
        raise BinningError(f"Integration window {window_ps} ps exceeds the period {period_ps} ps")
    if window_ps % hist.bin_ps != 0:
        raise BinningError(f"Bin width {hist.bin_ps} ps does not divide the integration window {window_ps} ps")

    n_peaks = max((2 * hist.range_ps + hist.bin_ps - window_ps) // (2 * period_ps), 0)
    delays = hist.delays
    # work with doubled delays to keep half windows integer
    index = np.floor_divide(2 * delays + period_ps, 2 * period_ps)
    offset = 2 * delays - 2 * index * period_ps
    inside = (offset >= -window_ps) & (offset < window_ps) & (np.abs(index) <= n_peaks)

    areas = np.zeros(2 * n_peaks + 1, dtype=np.uint64)
    np.add.at(areas, (index[inside] + n_peaks).astype(np.int64), hist.counts[inside])
    return PeakAreas(
        indices=np.arange(-n_peaks, n_peaks + 1, dtype=np.int64),
        areas=areas,
        period_ps=period_ps,
        window_ps=window_ps,
    )

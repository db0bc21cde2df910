import csv
from dataclasses import dataclass, replace

import numpy as np

from photonlab.core.exceptions import BinningError


def half_bins(bin_ps: int, range_ps: int) -> int:
    r""" Number of bins on each side of the zero-delay bin. """
    return (2 * range_ps + bin_ps) // (2 * bin_ps)


@dataclass(frozen=True)
class CorrelationHistogram:
    r"""
    Coincidence counts of delays `t_b - t_a` in uniform bins centered on multiples of `bin_ps`.

    Bin `j` (from `-J` to `J`) collects delays `d` with `sign(d) * floor((2|d| + bin) / (2 bin)) = j`, and only
    delays with `|d| <= range_ps` are counted.
    """

    bin_ps: int
    range_ps: int
    counts: np.ndarray
    n_a: int
    n_b: int
    duration_ps: int = 0

    def __post_init__(self):
        object.__setattr__(self, "counts", np.asarray(self.counts, dtype=np.uint64))
        expected = 2 * half_bins(self.bin_ps, self.range_ps) + 1
        if len(self.counts) != expected:
            raise BinningError(f"Expected {expected} bins for bin {self.bin_ps} ps and range {self.range_ps} ps, "
                               f"found {len(self.counts)}")

    @classmethod
    def zeros(cls, bin_ps: int, range_ps: int, n_a: int = 0, n_b: int = 0, duration_ps: int = 0):
        return cls(bin_ps, range_ps, np.zeros(2 * half_bins(bin_ps, range_ps) + 1, dtype=np.uint64), n_a, n_b,
                   duration_ps)

    @property
    def half_bins(self) -> int:
        return half_bins(self.bin_ps, self.range_ps)

    @property
    def delays(self) -> np.ndarray:
        r""" Bin centers in ps. """
        return np.arange(-self.half_bins, self.half_bins + 1, dtype=np.int64) * self.bin_ps

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def mirrored(self) -> "CorrelationHistogram":
        r""" The histogram of the swapped pair `(b, a)`. """
        return replace(self, counts=self.counts[::-1].copy(), n_a=self.n_b, n_b=self.n_a)

    def merge(self, other: "CorrelationHistogram") -> "CorrelationHistogram":
        r""" Exact sum of two histograms with the same binning, e.g. from two acquisitions. """
        if (self.bin_ps, self.range_ps) != (other.bin_ps, other.range_ps):
            raise BinningError(f"Cannot merge binning {(self.bin_ps, self.range_ps)} with "
                               f"{(other.bin_ps, other.range_ps)}")
        return CorrelationHistogram(
            self.bin_ps,
            self.range_ps,
            self.counts + other.counts,
            self.n_a + other.n_a,
            self.n_b + other.n_b,
            self.duration_ps + other.duration_ps,
        )

    def window(self, low_ps: int, high_ps: int) -> "tuple":
        r""" Delays and counts of the bins centered within `[low_ps, high_ps]`. """
        delays = self.delays
        mask = (delays >= low_ps) & (delays <= high_ps)
        return delays[mask], self.counts[mask]

    def to_csv(self, path: str):
        with open(path, "w", newline="") as fo:
            writer = csv.writer(fo)
            writer.writerow(["bin_center_ps", "counts"])
            writer.writerows(zip(self.delays.tolist(), self.counts.tolist()))


@dataclass(frozen=True)
class TcspcHistogram:
    r"""
    Start-stop histogram of tag times relative to the laser trigger. Bin `k` covers
    `[start_ps + k bin_ps, start_ps + (k + 1) bin_ps)`.
    """

    bin_ps: int
    start_ps: int
    counts: np.ndarray
    n_tags: int

    def __post_init__(self):
        object.__setattr__(self, "counts", np.asarray(self.counts, dtype=np.uint64))

    @property
    def centers(self) -> np.ndarray:
        return self.start_ps + (np.arange(len(self.counts)) + 0.5) * self.bin_ps

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_csv(self, path: str):
        with open(path, "w", newline="") as fo:
            writer = csv.writer(fo)
            writer.writerow(["bin_center_ps", "counts"])
            writer.writerows(zip(self.centers.tolist(), self.counts.tolist()))

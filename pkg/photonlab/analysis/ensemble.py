r"""
Summary statistics of a property measured over many emitters.
"""
import csv
import math
from dataclasses import dataclass
from typing import Dict, Sequence, Union

import numpy as np

from photonlab.core.exceptions import DomainError
from photonlab.core.types import Measurement


@dataclass(frozen=True)
class EnsembleStats:
    r"""
    Sample mean and sample standard deviation (n - 1 normalization) with a histogram of the values.
    `mean.error` is the standard error of the mean.
    """

    mean: Measurement
    std: float
    n: int
    counts: np.ndarray
    edges: np.ndarray

    def to_dict(self) -> Dict:
        return dict(
            mean=self.mean.to_dict(),
            std=float(self.std),
            n=int(self.n),
            histogram=dict(counts=self.counts.tolist(), edges=self.edges.tolist()),
        )

    def to_csv(self, path: str):
        with open(path, "w", newline="") as fo:
            writer = csv.writer(fo)
            writer.writerow(["low", "high", "count"])
            writer.writerows(zip(self.edges[:-1].tolist(), self.edges[1:].tolist(), self.counts.tolist()))


def ensemble_stats(values: Sequence[float], bins: Union[int, str] = "auto") -> EnsembleStats:
    r"""
    Args:
        values: one value per emitter, at least two
        bins: passed to `numpy.histogram`
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or len(values) < 2:
        raise DomainError(f"Ensemble statistics need at least two values, found {values.size}")
    if not np.all(np.isfinite(values)):
        raise DomainError("Ensemble values must be finite")

    std = float(np.std(values, ddof=1))
    counts, edges = np.histogram(values, bins=bins)
    return EnsembleStats(
        mean=Measurement(float(np.mean(values)), std / math.sqrt(len(values))),
        std=std,
        n=len(values),
        counts=counts,
        edges=edges,
    )

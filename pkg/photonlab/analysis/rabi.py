r"""
Preparation fidelity from the integrated intensity of a power sweep.
"""
import csv
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from photonlab.analysis.fitting import failed_fit, least_squares_fit, poisson_sigma
from photonlab.analysis.models import rabi_curve, rabi_curve_jac
from photonlab.core.types import FitResult, Measurement

logger = logging.getLogger(__name__)

MIN_SWEEP_POINTS = 8
LOBE_THRESHOLD = 0.8
NOISE_SIGMAS = 3.0


def _first_lobe(counts: np.ndarray) -> int:
    r""" Index of the highest point of the first run of points above `LOBE_THRESHOLD` of the maximum. """
    above = counts >= LOBE_THRESHOLD * counts.max()
    start = int(np.argmax(above))
    stop = start + int(np.argmin(above[start:])) if not above[start:].all() else len(counts)
    return start + int(np.argmax(counts[start:stop]))


@dataclass(frozen=True)
class RabiSweep:
    r""" Integrated counts at each excitation power (arbitrary units), `pulses` laser pulses per point. """

    power: np.ndarray
    counts: np.ndarray
    pulses: int = 0

    def __post_init__(self):
        power = np.asarray(self.power, dtype=np.float64)
        counts = np.asarray(self.counts, dtype=np.float64)
        if power.shape != counts.shape or power.ndim != 1:
            raise ValueError(f"Powers and counts must be 1-D arrays of equal length, found {power.shape} and "
                             f"{counts.shape}")
        object.__setattr__(self, "power", power)
        object.__setattr__(self, "counts", counts)

    @property
    def sqrt_power(self) -> np.ndarray:
        return np.sqrt(self.power)

    def to_csv(self, path: str):
        with open(path, "w", newline="") as fo:
            writer = csv.writer(fo)
            writer.writerow(["power", "counts"])
            writer.writerows(zip(self.power.tolist(), self.counts.tolist()))


def fit_rabi(sweep: RabiSweep) -> FitResult:
    r"""
    Fit `I(P) = A exp(-gamma theta) sin(theta / 2)^2` with `theta = pi sqrt(P / P_pi)`.

    Returns:
        a `FitResult` with `amplitude`, `damping` (per rad) and `pi_power`, plus the derived `prep_fidelity`,
        `exp(-gamma pi)`: the excitation reached at the pi-pulse relative to an undamped oscillation

    The starting `P_pi` is the top of the first lobe; an undamped sweep repeats that maximum at `9 P_pi`.
    Sweeps that never fall back from that lobe by more than the counting noise show no oscillation: they come
    back flagged and not converged.
    """
    names = ("amplitude", "damping", "pi_power")
    order = np.argsort(sweep.power)
    power, counts = sweep.power[order], sweep.counts[order]
    if len(counts) < len(names) + 1 or counts.max() <= 0:
        return failed_fit(names, len(counts), "Sweep has too few points or no signal", flags=("undersampled", ))

    flags = []
    if len(counts) < MIN_SWEEP_POINTS:
        flags.append("undersampled")
        logger.warning("Rabi sweep with %d points, at least %d are needed to resolve the oscillation", len(counts),
                       MIN_SWEEP_POINTS)

    peak = _first_lobe(counts)
    # an oscillation must fall back from its first maximum by more than the counting noise
    drop = counts[peak] - counts[peak + 1:].min() if peak < len(counts) - 1 else 0.0
    no_oscillation = drop <= NOISE_SIGMAS * math.sqrt(max(counts[peak], 1.0))
    pi_power0 = float(power[peak]) if power[peak] > 0 else float(power.max())
    # the second maximum sits at 9 P_pi, the damping is read from its height
    beyond = power >= 4 * pi_power0
    damping0 = 0.1
    if beyond.any() and counts[beyond].max() > 0:
        damping0 = max(math.log(counts[peak] / counts[beyond].max()) / (2 * math.pi), 0.0)

    result = least_squares_fit(
        rabi_curve,
        power,
        counts,
        p0=dict(amplitude=float(counts[peak]), damping=damping0, pi_power=pi_power0),
        sigma=poisson_sigma(counts),
        jac=rabi_curve_jac,
        bounds=dict(amplitude=(0.0, np.inf), damping=(0.0, np.inf), pi_power=(1e-12, np.inf)),
    )

    damping = result["damping"]
    fidelity = math.exp(-math.pi * damping.value)
    result = result.with_params(prep_fidelity=Measurement(fidelity, math.pi * fidelity * damping.error))

    if power.max() < 4 * result.value("pi_power"):
        flags.append("short_sweep")
    if no_oscillation:
        flags.append("no_oscillation")
        logger.warning("Intensity never falls back from its first maximum, no Rabi oscillation detected")
        result = replace(result, converged=False, message="No oscillation in the sweep")
    return result.with_flags(*flags)

r"""
Linewidth from a Fabry-Perot scan: Voigt fit with the Lorentzian part held at a known width.
"""
import csv
import logging
import math
from dataclasses import dataclass

import numpy as np

from photonlab.analysis.fitting import failed_fit, least_squares_fit, poisson_sigma
from photonlab.analysis.models import voigt_line
from photonlab.core.exceptions import DomainError
from photonlab.core.functional import VOIGT_C2, voigt_fwhm, voigt_gaussian_from_fwhm
from photonlab.core.types import FitResult, Measurement

logger = logging.getLogger(__name__)

MIN_SCAN_POINTS = 20
MIN_SCAN_LINEWIDTHS = 3.0


@dataclass(frozen=True)
class SpectralScan:
    r"""
    Counts transmitted through the interferometer at each detuning (GHz) of its resonance, `dwell_pulses`
    laser pulses per point.
    """

    detuning_ghz: np.ndarray
    counts: np.ndarray
    dwell_pulses: int = 0

    def __post_init__(self):
        detuning = np.asarray(self.detuning_ghz, dtype=np.float64)
        counts = np.asarray(self.counts, dtype=np.float64)
        if detuning.shape != counts.shape or detuning.ndim != 1:
            raise ValueError(f"Detunings and counts must be 1-D arrays of equal length, found {detuning.shape} "
                             f"and {counts.shape}")
        object.__setattr__(self, "detuning_ghz", detuning)
        object.__setattr__(self, "counts", counts)

    @property
    def span_ghz(self) -> float:
        return float(self.detuning_ghz.max() - self.detuning_ghz.min()) if len(self.detuning_ghz) else 0.0

    def half_maximum_width(self, background: float = 0.0) -> float:
        r""" Width of the region above half the peak height, a rough estimate of the FWHM. """
        signal = self.counts - background
        above = self.detuning_ghz[signal >= signal.max() / 2.0]
        return float(above.max() - above.min()) if len(above) else 0.0

    def to_csv(self, path: str):
        with open(path, "w", newline="") as fo:
            writer = csv.writer(fo)
            writer.writerow(["detuning_ghz", "counts"])
            writer.writerows(zip(self.detuning_ghz.tolist(), self.counts.tolist()))


def fit_voigt_fixed_lorentzian(scan: SpectralScan, f_l_ghz: float) -> FitResult:
    r"""
    Fit `amplitude`, `center`, `f_g` and a flat `background` of a Voigt line whose Lorentzian FWHM is frozen at
    `f_l_ghz`. The total FWHM of the fitted line comes back as the derived parameter `fwhm`.

    Scans with fewer than 20 points or spanning fewer than three linewidths are flagged.
    """
    if f_l_ghz <= 0:
        raise DomainError(f"Lorentzian width must be positive, found {f_l_ghz}")
    names = ("amplitude", "center", "f_g", "background")
    if len(scan.counts) < len(names) + 1 or scan.counts.max() <= 0:
        return failed_fit(names, len(scan.counts), "Scan has too few points or no signal")

    background0 = float(np.percentile(scan.counts, 10))
    peak = int(np.argmax(scan.counts))
    width0 = max(scan.half_maximum_width(background0), f_l_ghz * 1.01)
    p0 = dict(
        amplitude=float(scan.counts[peak] - background0),
        center=float(scan.detuning_ghz[peak]),
        f_g=max(voigt_gaussian_from_fwhm(width0, f_l_ghz), 1e-3),
        background=max(background0, 0.0),
    )

    def model(f, amplitude, center, f_g, background):
        return voigt_line(f, amplitude, center, f_l_ghz, f_g) + background

    result = least_squares_fit(
        model,
        scan.detuning_ghz,
        scan.counts,
        p0=p0,
        sigma=poisson_sigma(scan.counts),
        bounds=dict(amplitude=(0.0, np.inf), f_g=(0.0, np.inf), background=(0.0, np.inf)),
    )

    f_g = result["f_g"]
    fwhm = voigt_fwhm(f_l_ghz, f_g.value)
    # d fwhm / d f_g of the Voigt approximation
    slope = f_g.value / math.sqrt(VOIGT_C2 * f_l_ghz ** 2 + f_g.value ** 2) if f_g.value > 0 else 0.0
    result = result.with_params(fwhm=Measurement(fwhm, slope * f_g.error))

    flags = []
    if len(scan.counts) < MIN_SCAN_POINTS:
        flags.append("few_points")
    if scan.span_ghz < MIN_SCAN_LINEWIDTHS * fwhm:
        flags.append("narrow_scan")
        logger.warning("Scan spans %.3g GHz, less than %d linewidths of %.3g GHz", scan.span_ghz,
                       MIN_SCAN_LINEWIDTHS, fwhm)
    logger.debug("Voigt fit with f_L=%.4g GHz: f_G=%s, FWHM=%.4g GHz", f_l_ghz, f_g, fwhm)
    return result.with_flags(*flags)

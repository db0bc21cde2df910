r"""
Two-photon interference visibility: the raw ratio of co- to cross-polarized central peaks, its correction to the
wave-packet indistinguishability, and the overlaps expected from spectral diffusion.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.special import erfcx

from photonlab.analysis.g2 import DEFAULT_SIDE_PEAKS, extract_g2_raw
from photonlab.core.exceptions import DomainError
from photonlab.core.functional import GHZ_PS, PS_PER_US
from photonlab.core.types import Measurement
from photonlab.correlator.peaks import PeakAreas

logger = logging.getLogger(__name__)


def extract_vtpi_raw(
    peaks_copol: PeakAreas, peaks_crosspol: PeakAreas, bunching=None, n_side_peaks: int = DEFAULT_SIDE_PEAKS
) -> Measurement:
    r"""
    `V = 1 - g_par(0) / g_perp(0)`, each normalized to its own Poisson level as in `extract_g2_raw`.
    """
    g_par = extract_g2_raw(peaks_copol, bunching, n_side_peaks)
    g_perp = extract_g2_raw(peaks_crosspol, bunching, n_side_peaks)
    if g_perp.value == 0:
        raise DomainError("Cross-polarized central peak is empty, the visibility is undefined")
    ratio = g_par.value / g_perp.value
    error = math.sqrt((g_par.error / g_perp.value) ** 2 + (ratio * g_perp.error / g_perp.value) ** 2)
    return Measurement(1.0 - ratio, error)


@dataclass(frozen=True)
class VtpiInputs:
    r"""
    Background-free, bunching-normalized central areas of the co- and cross-polarized correlations, as given by
    `comb_g2` on the peak comb fits, so that the flat coincidence floor is already removed.
    """

    g_parallel: Measurement
    g_perpendicular: Measurement


@dataclass(frozen=True)
class VtpiCorrection:
    indistinguishability: Measurement
    v_raw: Measurement
    flags: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.flags


def pulsed_stray_ratio(g2_0: float, stray_share: float) -> float:
    r"""
    Pulsed stray photons per emitter photon `x` when `stray_share` of `g2_0` comes from stray light alone,
    i.e. `1 - 1 / (1 + x)^2 = stray_share * g2_0`.
    """
    if not 0 <= stray_share <= 1:
        raise DomainError(f"Stray-light share must be in [0, 1], found {stray_share}")
    if not 0 <= stray_share * g2_0 < 1:
        raise DomainError(f"Stray-light part of g2(0) must be in [0, 1), found {stray_share * g2_0}")
    return 1.0 / math.sqrt(1.0 - stray_share * g2_0) - 1.0


def _splitter_factors(r_b: float, r_mmi: float) -> Tuple[float, float, float]:
    t_b, t_m = 1.0 - r_b, 1.0 - r_mmi
    d0 = r_mmi * r_b + t_m * t_b
    d1 = r_mmi * t_b + t_m * r_b
    # per unit g2, coincidences of two photons of one pulse taking the same arm, relative to the side-peak level
    c = (r_mmi ** 2 + t_m ** 2) * r_b * t_b / (d0 * d1)
    # photons of consecutive pulses meeting on opposite inputs, relative to the side-peak level
    a = r_mmi * t_m * (r_b ** 2 + t_b ** 2) / (d0 * d1)
    k = 2.0 * r_b * t_b / (r_b ** 2 + t_b ** 2)
    return c, a, k


def correct_vtpi(
    inputs: VtpiInputs,
    g2_0: Union[Measurement, float],
    r_b: float,
    r_mmi: float = 0.5,
    stray_share: float = 0.0,
) -> VtpiCorrection:
    r"""
    Mean wave-packet indistinguishability `M` of consecutive emitter photons.

    With `g_par`, `g_perp` the normalized central areas, `m = g2 c` the coincidences of two photons of one pulse
    (`c = (R_m^2 + T_m^2) R_b T_b / (d_0 d_1)`, `d_0 = R_m R_b + T_m T_b`, `d_1 = R_m T_b + T_m R_b`) and
    `k = 2 R_b T_b / (R_b^2 + T_b^2)` the contrast of the fiber beamsplitter,
    `M = (g_perp - g_par) / (k (g_perp - m) f)`. It reduces to `1 - g_par / g_perp` for a balanced beamsplitter
    and a perfect single-photon source.

    `f` is the share of consecutive photon pairs made of two emitter photons. Pulsed stray light never
    interferes; with `x` its photons per emitter photon (`pulsed_stray_ratio` of the `stray_share` of `g2_0`)
    and `w = (g_perp - m) d_0 d_1 / (R_m T_m (R_b^2 + T_b^2))` the consecutive-pair level,
    `f = 1 - (2 x + x^2) / (w (1 + x)^2)`.

    `M` is clamped to [0, 1] with a flag. Inputs with `g_par` above `g_perp` by more than two standard errors are
    flagged as inconsistent and give `M = 0`.
    """
    if not 0 < r_b < 1 or not 0 < r_mmi < 1:
        raise DomainError(f"Splitting ratios must be in (0, 1), found R_b={r_b} and R_mmi={r_mmi}")
    g2_0 = g2_0 if isinstance(g2_0, Measurement) else Measurement(float(g2_0))
    if g2_0.value < 0:
        raise DomainError(f"g2(0) must be non-negative, found {g2_0.value}")

    p, q, g = inputs.g_perpendicular.value, inputs.g_parallel.value, g2_0.value
    if p <= 0:
        raise DomainError("Cross-polarized central peak is empty, the visibility is undefined")
    v_raw = Measurement(
        1.0 - q / p,
        math.hypot(inputs.g_parallel.error / p, q * inputs.g_perpendicular.error / p ** 2),
    )

    c, a, k = _splitter_factors(r_b, r_mmi)
    x = pulsed_stray_ratio(g, stray_share)
    m = g * c
    spread = math.hypot(inputs.g_parallel.error, inputs.g_perpendicular.error)
    pair_level = (p - m) / a
    emitter_pairs = 1.0 - (2.0 * x + x ** 2) / (pair_level * (1.0 + x) ** 2) if pair_level > 0 else 0.0
    if q - p > 2 * spread or p - m <= 0 or emitter_pairs <= 0:
        logger.warning("Co-polarized peak %s exceeds the cross-polarized %s, interference is inconsistent",
                       inputs.g_parallel, inputs.g_perpendicular)
        return VtpiCorrection(Measurement(0.0, float("nan")), v_raw, ("inconsistent_inputs", ))

    value = (p - q) / (k * (p - m) * emitter_pairs)
    # the emitter-pair share is a first-order correction, kept fixed in the error
    gradient = np.array([
        -1.0 / (k * (p - m)),
        (q - m) / (k * (p - m) ** 2),
        (p - q) * c / (k * (p - m) ** 2),
    ]) / emitter_pairs
    errors = np.array([inputs.g_parallel.error, inputs.g_perpendicular.error, g2_0.error])
    error = float(np.sqrt(np.sum((gradient * errors) ** 2)))

    flags = ()
    if value < 0 or value > 1:
        flags = ("clamped", )
        logger.debug("Indistinguishability %.4f clamped to [0, 1]", value)
        value = min(max(value, 0.0), 1.0)
    return VtpiCorrection(Measurement(value, error), v_raw, flags)


def remote_visibility(tau_ps: float, sigma_g_ghz: float) -> float:
    r"""
    Expected overlap of photons from two independent, identical emitters whose lines wander with Gaussian spread
    `sigma_g_ghz` each: the Lorentzian overlap `1 / (1 + (2 pi delta tau)^2)` averaged over a detuning
    `delta ~ N(0, sqrt(2) sigma_g)`.

    Closed form `sqrt(pi / 2) / s * erfcx(1 / (sqrt(2) s))` with `s = 2 pi sqrt(2) sigma_g tau`.
    """
    if tau_ps <= 0 or sigma_g_ghz < 0:
        raise DomainError(f"Remote visibility needs tau > 0 and sigma_g >= 0, found {tau_ps} and {sigma_g_ghz}")
    s = 2.0 * math.pi * math.sqrt(2.0) * sigma_g_ghz * tau_ps * GHZ_PS
    if s == 0:
        return 1.0
    return float(math.sqrt(math.pi / 2.0) / s * erfcx(1.0 / (math.sqrt(2.0) * s)))


def consecutive_visibility(tau_ps: float, sigma_g_ghz: float, delay_ps: float, t_c_us: float) -> float:
    r"""
    Expected overlap of two photons of one emitter separated by `delay_ps`, its detuning following an
    Ornstein-Uhlenbeck process of stationary spread `sigma_g_ghz` and correlation time `t_c_us`.

    The detuning difference after the delay has the spread `sqrt(2 (1 - exp(-delay / t_c))) sigma_g`, so this is
    `remote_visibility` with an effective `sigma_g sqrt(1 - exp(-delay / t_c))`.
    """
    if delay_ps < 0 or t_c_us <= 0:
        raise DomainError(f"Delay must be non-negative and t_c positive, found {delay_ps} and {t_c_us}")
    memory = -math.expm1(-delay_ps / (t_c_us * PS_PER_US)) if math.isfinite(t_c_us) else 0.0
    return remote_visibility(tau_ps, sigma_g_ghz * math.sqrt(memory))

r"""
Emitter presets of the three characterized quantum dots.

Only observables were measured, so every simulator knob is derived from them in closed form:

- the Gaussian part of the linewidth from the Voigt width with the Lorentzian part at the Fourier limit,
- the spectral-diffusion correlation time from the consecutive-photon indistinguishability,
- the split of the background-corrected `g2(0)` into re-excitation and pulsed stray light (half each by default),
- the CW stray light from the gap between raw and corrected `g2(0)`,
- the true on-time fraction from the measured one, undoing the dilution of the bunching by stray light,
- the blinking rates from that on-time and the two bunching timescales.
"""
import logging
import math
from functools import lru_cache
from typing import Dict, Optional, Tuple

from pydantic import Field
from scipy.optimize import brentq

from photonlab.analysis.visibility import consecutive_visibility, pulsed_stray_ratio, remote_visibility
from photonlab.core.configs import CircuitConfig, EmitterConfig, FrozenModel
from photonlab.core.exceptions import ConfigError, DomainError
from photonlab.core.functional import (
    GAUSSIAN_FWHM_FACTOR,
    PS_PER_S,
    fourier_limit,
    voigt_gaussian_from_fwhm,
)
from photonlab.emitter.blinking import blinking_rates_from_bunching

logger = logging.getLogger(__name__)

MEASURED_BETA = 0.508
BUNCHING_TIMESCALES_US = (65.0, 125.0)
BUNCHING_SPLIT = 0.5
REEXCITATION_SHARE = 0.5
T_C_BRACKET_US = (1e-4, 1e7)


class ExpectedMetric(FrozenModel):
    r""" A measured value with its uncertainty and the tolerance a simulation is checked against. """

    value: float
    error: float = Field(0.0, ge=0.0)
    tolerance: float = Field(0.0, ge=0.0)

    def check(self, value: float) -> bool:
        return abs(value - self.value) <= self.tolerance


class QdPreset(FrozenModel):
    r""" Named emitter and circuit configuration with the metrics measured on the real device. """

    name: str
    emitter: EmitterConfig
    circuit: CircuitConfig = CircuitConfig()
    expected: Dict[str, ExpectedMetric] = {}
    # part of the background-corrected g2(0) coming from re-excitation, the rest is pulsed stray light
    reexcitation_share: float = Field(REEXCITATION_SHARE, ge=0.0, le=1.0)


def split_g2(g2_raw: float,
             g2_bgc: float,
             reexcitation_share: float = REEXCITATION_SHARE) -> Tuple[float, float, float]:
    r"""
    Decompose `g2(0)` into the signal's own multiphoton term and the two stray-light contributions.

    With `mu` the signal photons per pulse, `x = rho / mu` the pulsed stray light and `z = (rho + c) / mu` all stray
    light relative to it, and `r` the signal-only `g2(0)`:
    `g2_bgc = (r + 2x + x^2) / (1 + x)^2` and `g2_raw = 1 - (1 - r) / (1 + z)^2`.
    `reexcitation_share` of `g2_bgc` is attributed to `r`, the rest to pulsed stray light.

    Returns:
        `(r, x, z)`
    """
    if not 0 <= g2_bgc <= g2_raw < 1:
        raise DomainError(f"Need 0 <= g2_bgc <= g2_raw < 1, found {g2_bgc} and {g2_raw}")
    if not 0 <= reexcitation_share <= 1:
        raise DomainError(f"Re-excitation share must be in [0, 1], found {reexcitation_share}")
    x = pulsed_stray_ratio(g2_bgc, 1.0 - reexcitation_share)
    r = (g2_bgc * (1.0 + x) ** 2 - 2.0 * x - x ** 2)
    z = math.sqrt((1.0 - r) / (1.0 - g2_raw)) - 1.0
    return r, x, z


def true_on_fraction(beta_measured: float, z: float) -> float:
    r""" On-time of the emitter alone, given the measured one diluted by non-blinking light `z` (relative). """
    if not 0 < beta_measured <= 1:
        raise DomainError(f"On-time fraction must be in (0, 1], found {beta_measured}")
    return 1.0 / (1.0 + (1.0 / beta_measured - 1.0) * (1.0 + z) ** 2)


def reexcitation_probability(r: float, beta: float, prep_fidelity: float) -> float:
    r""" `p` such that `2 p / (beta F (1 + p)^2) = r`, the smaller root. """
    target = r * beta * prep_fidelity
    if target > 0.5:
        raise DomainError(f"Signal g2(0)={r} cannot be reached with beta={beta} and F={prep_fidelity}")
    if target == 0:
        return 0.0
    # 2p / (1 + p)^2 = target  <=>  target p^2 + 2 (target - 1) p + target = 0
    return ((1.0 - target) - math.sqrt(1.0 - 2.0 * target)) / target


def gaussian_sigma(tau_ps: float, linewidth_ghz: float) -> float:
    r""" Standard deviation (GHz) of the spectral diffusion that broadens the Fourier limit to `linewidth_ghz`. """
    return voigt_gaussian_from_fwhm(linewidth_ghz, fourier_limit(tau_ps)) / GAUSSIAN_FWHM_FACTOR


def correlation_time(tau_ps: float, sigma_g_ghz: float, delay_ps: float, indistinguishability: float) -> float:
    r"""
    Spectral-diffusion correlation time (µs) at which photons `delay_ps` apart reach the given overlap.
    Targets below the fully diffused overlap give the lower end of the bracket, targets of 1 the upper end.
    """
    low, high = T_C_BRACKET_US
    if sigma_g_ghz == 0 or indistinguishability >= consecutive_visibility(tau_ps, sigma_g_ghz, delay_ps, high):
        return high
    if indistinguishability <= remote_visibility(tau_ps, sigma_g_ghz):
        logger.warning("Overlap %.3f is below the fully diffused %.3f, using the shortest correlation time",
                       indistinguishability, remote_visibility(tau_ps, sigma_g_ghz))
        return low
    return brentq(
        lambda t_c: consecutive_visibility(tau_ps, sigma_g_ghz, delay_ps, t_c) - indistinguishability, low, high,
        xtol=1e-9, rtol=1e-10
    )


def derive_preset(
    name: str,
    tau_ps: Tuple[float, float],
    linewidth_ghz: Tuple[float, float],
    g2_raw: Tuple[float, float],
    g2_bgc: Tuple[float, float],
    v_raw: Tuple[float, float],
    v_corr: Tuple[float, float],
    prep_fidelity: Tuple[float, float],
    beta: float = MEASURED_BETA,
    bunching_us: Tuple[float, float] = BUNCHING_TIMESCALES_US,
    v_corr_tolerance: float = 0.04,
    reexcitation_share: float = REEXCITATION_SHARE,
    circuit: Optional[CircuitConfig] = None,
) -> QdPreset:
    r"""
    Build a preset from the measured `(value, error)` of each metric.
    """
    circuit = circuit or CircuitConfig()
    r, x, z = split_g2(g2_raw[0], g2_bgc[0], reexcitation_share)
    beta_true = true_on_fraction(beta, z)
    p_reexcite = reexcitation_probability(r, beta_true, prep_fidelity[0])
    mu = beta_true * prep_fidelity[0] * (1.0 + p_reexcite)
    cw_per_period = (z - x) * mu

    sigma_g = gaussian_sigma(tau_ps[0], linewidth_ghz[0])
    t_c = correlation_time(tau_ps[0], sigma_g, circuit.delay_ps, v_corr[0])

    emitter = EmitterConfig(
        tau_ps=tau_ps[0],
        prep_fidelity=prep_fidelity[0],
        p_reexcite=p_reexcite,
        sigma_g_ghz=sigma_g,
        ou_tc_us=t_c,
        blink=blinking_rates_from_bunching(beta_true, *bunching_us, split=BUNCHING_SPLIT),
    )
    circuit = circuit.model_copy(update=dict(
        stray_pulsed_rate=x * mu,
        stray_cw_rate_hz=cw_per_period * PS_PER_S / circuit.rep_period_ps,
    ))
    logger.debug("Preset %s: p_reexcite=%.4g, sigma_g=%.4g GHz, t_c=%.4g us, beta=%.4f, stray %.4g/pulse, %.4g Hz",
                 name, p_reexcite, sigma_g, t_c, beta_true, circuit.stray_pulsed_rate, circuit.stray_cw_rate_hz)

    expected = dict(
        tau_ps=ExpectedMetric(value=tau_ps[0], error=tau_ps[1], tolerance=0.02 * tau_ps[0]),
        linewidth_ghz=ExpectedMetric(value=linewidth_ghz[0], error=linewidth_ghz[1], tolerance=0.15),
        g2_raw=ExpectedMetric(value=g2_raw[0], error=g2_raw[1], tolerance=0.02),
        g2_bgc=ExpectedMetric(value=g2_bgc[0], error=g2_bgc[1], tolerance=0.02),
        v_raw=ExpectedMetric(value=v_raw[0], error=v_raw[1], tolerance=0.03),
        v_corr=ExpectedMetric(value=v_corr[0], error=v_corr[1], tolerance=v_corr_tolerance),
        prep_fidelity=ExpectedMetric(value=prep_fidelity[0], error=prep_fidelity[1], tolerance=0.03),
        beta=ExpectedMetric(value=beta, error=0.004, tolerance=0.02),
    )
    return QdPreset(
        name=name, emitter=emitter, circuit=circuit, expected=expected, reexcitation_share=reexcitation_share
    )


@lru_cache(maxsize=None)
def _presets() -> Dict[str, QdPreset]:
    return dict(
        qd1=derive_preset(
            "qd1",
            tau_ps=(201.0, 1.0),
            linewidth_ghz=(4.82, 0.09),
            g2_raw=(0.142, 0.003),
            g2_bgc=(0.078, 0.010),
            v_raw=(0.760, 0.012),
            v_corr=(0.859, 0.015),
            prep_fidelity=(0.584, 0.025),
            reexcitation_share=1.0,
        ),
        qd2=derive_preset(
            "qd2",
            tau_ps=(135.0, 1.0),
            linewidth_ghz=(3.74, 0.08),
            g2_raw=(0.209, 0.002),
            g2_bgc=(0.168, 0.002),
            v_raw=(0.775, 0.014),
            v_corr=(0.939, 0.004),
            prep_fidelity=(0.589, 0.028),
            v_corr_tolerance=0.03,
        ),
        qd3=derive_preset(
            "qd3",
            tau_ps=(207.0, 1.0),
            linewidth_ghz=(8.79, 0.20),
            g2_raw=(0.121, 0.002),
            g2_bgc=(0.071, 0.009),
            v_raw=(0.714, 0.013),
            v_corr=(0.814, 0.016),
            prep_fidelity=(0.638, 0.049),
        ),
        ideal=QdPreset(name="ideal", emitter=EmitterConfig(), circuit=CircuitConfig()),
    )


def list_presets() -> Tuple[str, ...]:
    return tuple(_presets())


def get_preset(name: str) -> QdPreset:
    r""" Preset by case-insensitive name. """
    presets = _presets()
    try:
        return presets[name.lower()]
    except KeyError:
        raise ConfigError(f"Unknown preset '{name}', available: {', '.join(presets)}") from None

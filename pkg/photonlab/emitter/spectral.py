r"""
Ornstein-Uhlenbeck spectral diffusion of the emission frequency.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from photonlab.core.exceptions import DomainError
from photonlab.core.functional import PS_PER_US


@dataclass(frozen=True)
class SpectralState:
    r""" Current displacement (GHz) of the emission frequency. """

    detuning: float = 0.0


def _ou_coefficients(dt_ps: float, sigma_g: float, t_c_us: float):
    if sigma_g < 0:
        raise DomainError(f"Spectral diffusion width must be non-negative, found {sigma_g}")
    if t_c_us <= 0:
        raise DomainError(f"Correlation time must be positive, found {t_c_us} µs")
    if dt_ps <= 0:
        raise DomainError(f"Time step must be positive, found {dt_ps}")
    decay = math.exp(-dt_ps / (t_c_us * PS_PER_US))
    return decay, sigma_g * math.sqrt(-math.expm1(-2.0 * dt_ps / (t_c_us * PS_PER_US)))


def step_spectral(
    state: SpectralState, dt_ps: float, sigma_g: float, t_c_us: float, rng: np.random.Generator
) -> SpectralState:
    r"""
    Exact OU update `x' = x exp(-dt/t_c) + sigma_g sqrt(1 - exp(-2 dt/t_c)) N(0, 1)`.
    """
    decay, scale = _ou_coefficients(dt_ps, sigma_g, t_c_us)
    return SpectralState(detuning=state.detuning * decay + scale * rng.standard_normal())


def ou_series(
    x0: float, n: int, dt_ps: float, sigma_g: float, t_c_us: float, rng: np.random.Generator
) -> np.ndarray:
    r"""
    `n` consecutive OU values at spacing `dt_ps` following `x0` (which is not included).
    Consumes exactly `n` normal draws, like `n` calls to `step_spectral`.
    """
    decay, scale = _ou_coefficients(dt_ps, sigma_g, t_c_us)
    noise = rng.standard_normal(n)
    if n == 0:
        return np.zeros(0)
    series, _ = lfilter([scale], [1.0, -decay], noise, zi=[decay * x0])
    return series


def initial_spectral_state(sigma_g: float, rng: np.random.Generator) -> SpectralState:
    r""" A detuning drawn from the stationary distribution N(0, sigma_g^2). """
    return SpectralState(detuning=sigma_g * rng.standard_normal())

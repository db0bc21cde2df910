r"""
Model functions of the fits, vectorized over their first argument.
"""
import math

import numpy as np
from scipy.special import erfcx, ndtr, voigt_profile

from photonlab.core.exceptions import DomainError
from photonlab.core.functional import GAUSSIAN_FWHM_FACTOR

SQRT2 = math.sqrt(2.0)


def emg(t, tau: float, sigma: float, t0: float = 0.0) -> np.ndarray:
    r"""
    Unit-area density of an exponential decay `Exp(tau)` starting at `t0`, convolved with a Gaussian of std `sigma`.

    Written with the scaled complementary error function so that it stays finite far in the tail and for
    `sigma << tau`; `sigma = 0` gives the bare exponential.
    """
    if tau <= 0 or sigma < 0:
        raise DomainError(f"EMG needs tau > 0 and sigma >= 0, found {tau} and {sigma}")
    x = np.asarray(t, dtype=np.float64) - t0
    if sigma == 0:
        return np.where(x >= 0, np.exp(-np.maximum(x, 0.0) / tau) / tau, 0.0)

    z = (sigma / tau - x / sigma) / SQRT2
    gauss = np.exp(-0.5 * (x / sigma) ** 2)
    result = np.empty_like(x)
    head = z >= 0
    result[head] = gauss[head] * erfcx(z[head])
    tail = ~head
    result[tail] = 2.0 * np.exp(0.5 * (sigma / tau) ** 2 - x[tail] / tau) - gauss[tail] * erfcx(-z[tail])
    return result / (2.0 * tau)


def emg_cdf(t, tau: float, sigma: float, t0: float = 0.0) -> np.ndarray:
    r""" Cumulative distribution of `emg`, `Phi(x / sigma) - tau * emg(x)`. """
    x = np.asarray(t, dtype=np.float64) - t0
    if sigma == 0:
        return np.where(x >= 0, 1.0 - np.exp(-np.maximum(x, 0.0) / tau), 0.0)
    return ndtr(x / sigma) - tau * emg(x, tau, sigma)


def two_sided_emg(t, tau: float, sigma: float, t0: float = 0.0) -> np.ndarray:
    r""" Unit-area two-sided exponential `exp(-|t| / tau) / (2 tau)` convolved with a Gaussian of std `sigma`. """
    x = np.asarray(t, dtype=np.float64) - t0
    return 0.5 * (emg(x, tau, sigma) + emg(-x, tau, sigma))


def voigt_line(f, amplitude: float, center: float, f_l: float, f_g: float) -> np.ndarray:
    r""" Voigt line of peak height `amplitude` from the FWHM of its Lorentzian and Gaussian parts (GHz). """
    if f_l < 0 or f_g < 0 or f_l + f_g == 0:
        raise DomainError(f"Voigt line needs non-negative widths, not both zero, found {f_l} and {f_g}")
    sigma, gamma = f_g / GAUSSIAN_FWHM_FACTOR, f_l / 2.0
    shape = voigt_profile(np.asarray(f, dtype=np.float64) - center, sigma, gamma)
    return amplitude * shape / voigt_profile(0.0, sigma, gamma)


def lorentzian(f, f_l: float, center: float = 0.0) -> np.ndarray:
    r""" Unit-height Lorentzian of FWHM `f_l`. """
    return 1.0 / (1.0 + (2.0 * (np.asarray(f, dtype=np.float64) - center) / f_l) ** 2)


def bunching_envelope(t, p_inf: float, a1: float, tau1: float, a2: float = 0.0, tau2: float = 1.0) -> np.ndarray:
    r""" `p_inf (1 + a1 exp(-|t| / tau1) + a2 exp(-|t| / tau2))`. """
    t = np.abs(np.asarray(t, dtype=np.float64))
    return p_inf * (1.0 + a1 * np.exp(-t / tau1) + a2 * np.exp(-t / tau2))


def bunching_envelope_jac(t, p_inf: float, a1: float, tau1: float, a2: float = None, tau2: float = None):
    r""" Jacobian of `bunching_envelope`; the second component is left out when `a2` is None. """
    t = np.abs(np.asarray(t, dtype=np.float64))
    e1 = np.exp(-t / tau1)
    columns = [1.0 + a1 * e1, p_inf * e1, p_inf * a1 * e1 * t / tau1 ** 2]
    if a2 is not None:
        e2 = np.exp(-t / tau2)
        columns[0] = columns[0] + a2 * e2
        columns += [p_inf * e2, p_inf * a2 * e2 * t / tau2 ** 2]
    return np.stack(columns, axis=1)


def rabi_curve(power, amplitude: float, damping: float, pi_power: float) -> np.ndarray:
    r""" `A exp(-damping theta) sin(theta / 2)^2` with `theta = pi sqrt(power / pi_power)`. """
    theta = np.pi * np.sqrt(np.maximum(np.asarray(power, dtype=np.float64), 0.0) / pi_power)
    return amplitude * np.exp(-damping * theta) * np.sin(theta / 2.0) ** 2


def rabi_curve_jac(power, amplitude: float, damping: float, pi_power: float) -> np.ndarray:
    theta = np.pi * np.sqrt(np.maximum(np.asarray(power, dtype=np.float64), 0.0) / pi_power)
    envelope = np.exp(-damping * theta)
    sin2 = np.sin(theta / 2.0) ** 2
    d_theta = amplitude * envelope * (0.5 * np.sin(theta) - damping * sin2)
    return np.stack([
        envelope * sin2,
        -theta * amplitude * envelope * sin2,
        d_theta * (-theta / (2.0 * pi_power)),
    ], axis=1)


def exponential_decay(x, amplitude: float, rate: float) -> np.ndarray:
    return amplitude * np.exp(-rate * np.asarray(x, dtype=np.float64))


def exponential_decay_jac(x, amplitude: float, rate: float) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    e = np.exp(-rate * x)
    return np.stack([e, -amplitude * x * e], axis=1)

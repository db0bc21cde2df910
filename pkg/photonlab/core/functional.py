r"""
Unit conventions and closed-form helpers.

Times are integer picoseconds, frequencies are GHz as 64-bit floats and wavelengths are nm.
The product of a frequency in GHz and a time in ps is expressed in units of 1e-3 cycles.
"""
import math
from typing import Union

import numpy as np

from photonlab.core.exceptions import DomainError

PS_PER_NS = 1_000
PS_PER_US = 1_000_000
PS_PER_S = 1_000_000_000_000
GHZ_PS = 1e-3
SPEED_OF_LIGHT_NM_GHZ = 299_792_458.0

# 2 * sqrt(2 * ln(2))
GAUSSIAN_FWHM_FACTOR = 2.0 * math.sqrt(2.0 * math.log(2.0))

# Olivero-Longbothum coefficients
VOIGT_C1 = 0.5346
VOIGT_C2 = 0.2166

ArrayOrFloat = Union[float, np.ndarray]


def fourier_limit(tau_ps: float) -> float:
    r"""
    Transform-limited linewidth (FWHM, GHz) of an exponential wave packet with decay time `tau_ps`.

    >>> round(fourier_limit(201), 3)
    0.792
    """
    if math.isnan(tau_ps) or tau_ps <= 0:
        raise DomainError(f"Decay time must be positive, found {tau_ps} ps")
    if math.isinf(tau_ps):
        return 0.0
    return 1e3 / (2.0 * math.pi * tau_ps)


def voigt_fwhm(f_l_ghz: float, f_g_ghz: float) -> float:
    r"""
    Approximate FWHM of a Voigt profile from the FWHM of its Lorentzian and Gaussian parts.
    Accurate to about 0.02% of the exact convolution width.
    """
    if f_l_ghz < 0 or f_g_ghz < 0:
        raise DomainError(f"Widths must be non-negative, found f_L={f_l_ghz}, f_G={f_g_ghz}")
    return VOIGT_C1 * f_l_ghz + math.sqrt(VOIGT_C2 * f_l_ghz ** 2 + f_g_ghz ** 2)


def voigt_gaussian_from_fwhm(fwhm_ghz: float, f_l_ghz: float) -> float:
    r"""
    Gaussian FWHM that, combined with the Lorentzian FWHM `f_l_ghz`, gives a Voigt profile of width `fwhm_ghz`.
    This is the exact inverse of `voigt_fwhm`.
    """
    if f_l_ghz < 0:
        raise DomainError(f"Lorentzian width must be non-negative, found {f_l_ghz}")
    if fwhm_ghz < f_l_ghz:
        raise DomainError(f"Voigt width {fwhm_ghz} GHz is narrower than its Lorentzian part {f_l_ghz} GHz")
    squared = (fwhm_ghz - VOIGT_C1 * f_l_ghz) ** 2 - VOIGT_C2 * f_l_ghz ** 2
    # the approximation gives a width slightly below f_L for f_G = 0
    return math.sqrt(max(squared, 0.0))


def gaussian_fwhm_to_sigma(fwhm: ArrayOrFloat) -> ArrayOrFloat:
    return fwhm / GAUSSIAN_FWHM_FACTOR


def sigma_to_gaussian_fwhm(sigma: ArrayOrFloat) -> ArrayOrFloat:
    return sigma * GAUSSIAN_FWHM_FACTOR


def wavelength_to_frequency_ghz(wavelength_nm: ArrayOrFloat) -> ArrayOrFloat:
    r""" Optical frequency in GHz of light with vacuum wavelength `wavelength_nm`. """
    if np.any(np.asarray(wavelength_nm) <= 0):
        raise DomainError(f"Wavelength must be positive, found {wavelength_nm}")
    return SPEED_OF_LIGHT_NM_GHZ / wavelength_nm


def linewidth_to_fourier_ratio(linewidth_ghz: float, tau_ps: float) -> float:
    r""" How many times broader than the Fourier limit a measured line is. """
    return linewidth_ghz / fourier_limit(tau_ps)

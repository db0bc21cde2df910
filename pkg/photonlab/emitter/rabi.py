import math
from typing import Optional, Union

import numpy as np

from photonlab.core.exceptions import DomainError


def damping_from_fidelity(prep_fidelity: float) -> float:
    r""" Damping per radian that leaves `prep_fidelity` at a pulse area of pi. """
    if not 0 < prep_fidelity <= 1:
        raise DomainError(f"Preparation fidelity must be in (0, 1], found {prep_fidelity}")
    return -math.log(prep_fidelity) / math.pi


def pulse_area(power, pi_power: float = 1.0):
    r""" Pulse area (rad) for an excitation power, the area scaling with the square root of the power. """
    if pi_power <= 0:
        raise DomainError(f"Pi-pulse power must be positive, found {pi_power}")
    power = np.asarray(power, dtype=np.float64)
    if np.any(power < 0):
        raise DomainError("Excitation power must be non-negative")
    return math.pi * np.sqrt(power / pi_power)


def rabi_excitation_prob(
    pulse_area_rad: Union[float, np.ndarray],
    prep_fidelity: Optional[float] = None,
    damping: Optional[float] = None,
) -> Union[float, np.ndarray]:
    r"""
    Excitation probability after a resonant pulse of area `theta`: `exp(-damping * theta) * sin(theta / 2)^2`.

    Give either the damping per radian or the preparation fidelity reached at `theta = pi`.
    """
    if (prep_fidelity is None) == (damping is None):
        raise ValueError("Give exactly one of `prep_fidelity` and `damping`")
    theta = np.asarray(pulse_area_rad, dtype=np.float64)
    if np.any(theta < 0):
        raise DomainError("Pulse area must be non-negative")

    if prep_fidelity is not None and prep_fidelity == 0:
        probability = np.zeros_like(theta)
    else:
        gamma = damping if damping is not None else damping_from_fidelity(prep_fidelity)
        if gamma < 0:
            raise DomainError(f"Damping must be non-negative, found {gamma}")
        probability = np.exp(-gamma * theta) * np.sin(theta / 2.0) ** 2
    return float(probability) if probability.ndim == 0 else probability

r"""
Two-photon interference at the fiber beamsplitter.
"""
from typing import Tuple, Union

import numpy as np

from photonlab.core.exceptions import DomainError
from photonlab.core.functional import GHZ_PS
from photonlab.core.types import PhotonPacket, PhotonStream


def pair_overlap(
    t0_1, tau_1, detuning_1, polarization_1, t0_2, tau_2, detuning_2, polarization_2
) -> np.ndarray:
    r"""
    Overlap `|<psi_1|psi_2>|^2` of exponential wave packets, element-wise.

    With decay rates `g = 1 / tau` and angular detuning `dw = 2 pi dnu`:
    `M = 4 g1 g2 / (g1 + g2)^2 * exp(-g_early |dt|) / (1 + (2 dw / (g1 + g2))^2)`,
    `g_early` being the rate of the packet that starts first. Orthogonal polarizations give 0.
    """
    tau_1 = np.asarray(tau_1, dtype=np.float64)
    tau_2 = np.asarray(tau_2, dtype=np.float64)
    if np.any(tau_1 <= 0) or np.any(tau_2 <= 0):
        raise DomainError("Wave packet decay times must be positive")
    g1, g2 = 1.0 / tau_1, 1.0 / tau_2
    dt = np.asarray(t0_2, dtype=np.float64) - np.asarray(t0_1, dtype=np.float64)
    g_early = np.where(dt >= 0, g1, g2)
    dw = 2.0 * np.pi * (np.asarray(detuning_1, dtype=np.float64) - np.asarray(detuning_2, dtype=np.float64)) * GHZ_PS
    shape = 4.0 * g1 * g2 / (g1 + g2) ** 2
    overlap = shape * np.exp(-g_early * np.abs(dt)) / (1.0 + (2.0 * dw / (g1 + g2)) ** 2)
    return np.where(np.asarray(polarization_1) == np.asarray(polarization_2), overlap, 0.0)


def hom_overlap(p1: PhotonPacket, p2: PhotonPacket) -> float:
    r"""
    Overlap of two packets, `exp(-|dt| / tau) / (1 + (2 pi dnu tau)^2)` for equal decay times.
    Start times are taken as given, so any delay must already be compensated.
    """
    return float(pair_overlap(p1.t0, p1.tau, p1.detuning, p1.polarization, p2.t0, p2.tau, p2.detuning, p2.polarization))


def stream_overlap(first: PhotonStream, second: PhotonStream) -> np.ndarray:
    r""" Element-wise overlap of two equally long streams. """
    return pair_overlap(
        first.t0, first.tau, first.detuning, first.polarization,
        second.t0, second.tau, second.detuning, second.polarization,
    )


def coincidence_probability(r_b: float, overlap) -> Union[float, np.ndarray]:
    r""" Probability that two photons entering opposite ports leave through opposite ports. """
    t_b = 1.0 - r_b
    return r_b ** 2 + t_b ** 2 - 2.0 * r_b * t_b * np.asarray(overlap)


def fiber_bs_two_photon(
    p1: Union[PhotonStream, PhotonPacket],
    p2: Union[PhotonStream, PhotonPacket],
    r_b: float,
    overlap,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    r"""
    Output ports of photon pairs, `p1` entering port 0 and `p2` port 1.

    The pair leaves through opposite ports with probability `R^2 + T^2 - 2 R T M`; given that, both photons are
    reflected (keeping their port) with weight `R^2` and transmitted with weight `T^2`. Otherwise both photons
    leave through the same port, either one with equal probability.
    """
    if not 0 < r_b < 1:
        raise DomainError(f"Beamsplitter reflectivity must be in (0, 1), found {r_b}")
    p1, p2 = PhotonStream.coerce(p1), PhotonStream.coerce(p2)
    if len(p1) != len(p2):
        raise ValueError(f"Pairs need equally long inputs, found {len(p1)} and {len(p2)}")
    n = len(p1)
    overlap = np.broadcast_to(np.asarray(overlap, dtype=np.float64), (n,))
    if np.any((overlap < 0) | (overlap > 1)):
        raise DomainError("Overlap must lie in [0, 1]")

    t_b = 1.0 - r_b
    split = rng.random(n) < coincidence_probability(r_b, overlap)
    choice = rng.random(n)

    reflected = choice < r_b ** 2 / (r_b ** 2 + t_b ** 2)
    bunched_port = (choice < 0.5).astype(np.int8)
    port_1 = np.where(split, np.where(reflected, 0, 1), 1 - bunched_port).astype(np.int8)
    port_2 = np.where(split, np.where(reflected, 1, 0), 1 - bunched_port).astype(np.int8)
    return port_1, port_2

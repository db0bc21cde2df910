r"""
Passive elements: waveguide loss, the on-chip MMI splitter and classical routing at the fiber beamsplitter.
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from photonlab.core.exceptions import DomainError
from photonlab.core.types import PhotonPacket, PhotonStream


def transmission(alpha_db_per_mm: float, length_mm: float) -> float:
    r""" Power transmission `10^(-alpha L / 10)` of a waveguide section. """
    if alpha_db_per_mm < 0 or length_mm < 0:
        raise DomainError(f"Attenuation and length must be non-negative, found {alpha_db_per_mm} dB/mm, {length_mm} mm")
    return 10.0 ** (-alpha_db_per_mm * length_mm / 10.0)


def attenuate(survival_input: float, alpha_db_per_mm: float, length_mm: float) -> float:
    return survival_input * transmission(alpha_db_per_mm, length_mm)


@dataclass(frozen=True)
class RoutedPhoton:
    packet: PhotonPacket
    port: int
    survived: bool


@dataclass(frozen=True)
class RoutedPhotons:
    r"""
    Columnar output of a splitter. `port` is -1 for photons that did not survive.
    """

    photons: PhotonStream
    port: np.ndarray
    survived: np.ndarray

    def __len__(self) -> int:
        return len(self.photons)

    def __getitem__(self, i: int) -> RoutedPhoton:
        return RoutedPhoton(self.photons.packet(i), int(self.port[i]), bool(self.survived[i]))

    def output(self, port: int) -> PhotonStream:
        r""" Surviving photons leaving through `port`. """
        return self.photons.select(self.survived & (self.port == port))

    @property
    def n_lost(self) -> int:
        return int(np.count_nonzero(~self.survived))


def survive(photons: PhotonStream, probability: float, rng: np.random.Generator) -> np.ndarray:
    r""" Independent Bernoulli survival draw per photon. """
    if not 0 <= probability <= 1:
        raise DomainError(f"Survival probability must be in [0, 1], found {probability}")
    return rng.random(len(photons)) < probability


def mmi_split(
    photons: Union[PhotonStream, PhotonPacket], r_mmi: float, eta_mmi: float, rng: np.random.Generator
) -> RoutedPhotons:
    r"""
    Each photon survives the MMI with probability `eta_mmi` and, if it does, leaves through port 0 with
    probability `r_mmi`, through port 1 otherwise.
    """
    if not 0 <= r_mmi <= 1:
        raise DomainError(f"MMI ratio must be in [0, 1], found {r_mmi}")
    photons = PhotonStream.coerce(photons)
    survived = survive(photons, eta_mmi, rng)
    port = np.where(rng.random(len(photons)) < r_mmi, 0, 1).astype(np.int8)
    port[~survived] = -1
    return RoutedPhotons(photons=photons, port=port, survived=survived)


def fiber_bs_single(
    photons: Union[PhotonStream, PhotonPacket], r_b: float, rng: np.random.Generator, input_port=0
) -> np.ndarray:
    r"""
    Classical routing at a beamsplitter: reflection with probability `r_b` keeps the input index,
    transmission swaps it. `input_port` is a scalar or one entry per photon.
    """
    if not 0 <= r_b <= 1:
        raise DomainError(f"Beamsplitter reflectivity must be in [0, 1], found {r_b}")
    photons = PhotonStream.coerce(photons)
    input_port = np.broadcast_to(np.asarray(input_port, dtype=np.int8), (len(photons),))
    reflected = rng.random(len(photons)) < r_b
    return np.where(reflected, input_port, 1 - input_port).astype(np.int8)

r"""
Circuit topologies: the on-chip splitter shared by every measurement and the Mach-Zehnder arrangement used
for two-photon interference (MMI, delay line, polarization control, fiber beamsplitter).
"""
import logging
from typing import Callable, Optional, Tuple, Union

import numpy as np

from photonlab.circuit.elements import fiber_bs_single, mmi_split, survive, transmission
from photonlab.circuit.interference import fiber_bs_two_photon, stream_overlap
from photonlab.circuit.ledger import MMI, WAVEGUIDE, PhotonLedger
from photonlab.core.configs import CircuitConfig
from photonlab.core.types import Origin, PhotonStream, Polarization

logger = logging.getLogger(__name__)

OverlapOverride = Union[float, Callable[[PhotonStream, PhotonStream], np.ndarray]]


def split_on_chip(
    photons: PhotonStream,
    circuit_cfg: CircuitConfig,
    rng: np.random.Generator,
    ledger: Optional[PhotonLedger] = None,
) -> Tuple[PhotonStream, PhotonStream]:
    r"""
    Propagate photons through the access waveguide and the MMI; return the streams of the two MMI outputs.
    """
    in_waveguide = survive(photons, transmission(circuit_cfg.attenuation_db_per_mm, circuit_cfg.path_length_mm), rng)
    routed = mmi_split(photons.select(in_waveguide), circuit_cfg.mmi_ratio, circuit_cfg.mmi_transmission, rng)
    if ledger is not None:
        ledger.add_input(len(photons))
        ledger.record(WAVEGUIDE, len(photons) - int(np.count_nonzero(in_waveguide)))
        ledger.record(MMI, routed.n_lost)
    return routed.output(0), routed.output(1)


def interference_windows(t0: np.ndarray, window_ps: float) -> np.ndarray:
    r"""
    Cluster label of each photon of a time-sorted stream: a new window opens whenever the gap to the previous
    photon is at least `window_ps`.
    """
    if len(t0) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate([[0], np.cumsum(np.diff(t0) >= window_ps)])


def run_hom_topology(
    arms: Tuple[PhotonStream, PhotonStream],
    circuit_cfg: CircuitConfig,
    rng: np.random.Generator,
    overlap_override: Optional[OverlapOverride] = None,
) -> Tuple[PhotonStream, PhotonStream]:
    r"""
    Recombine the two MMI outputs on the fiber beamsplitter and return the photons reaching each detector.

    Arm 1 is delayed by `delay_ps` and, in the cross configuration, rotated to the orthogonal polarization.
    Photons are grouped into interference windows of `interference_window_tau` decay times; a window holding
    exactly one photon from each input interferes through `fiber_bs_two_photon`, every other photon is routed
    classically. Stray-light photons never interfere. `overlap_override` replaces the computed overlap of
    emitter pairs, either by a constant or by a function of the two paired streams.
    """
    arm_0, arm_1 = arms
    arm_1 = arm_1.replace(t0=arm_1.t0 + circuit_cfg.delay_ps)
    if circuit_cfg.pol_config == "cross":
        rotated = np.where(arm_1.polarization == Polarization.H, Polarization.V, Polarization.H)
        arm_1 = arm_1.replace(polarization=rotated)

    photons = PhotonStream.concatenate([arm_0, arm_1])
    input_port = np.concatenate([np.zeros(len(arm_0), dtype=np.int8), np.ones(len(arm_1), dtype=np.int8)])
    order = np.lexsort((input_port, photons.t0))
    photons, input_port = photons.select(order), input_port[order]
    if len(photons) == 0:
        return PhotonStream.empty(), PhotonStream.empty()

    window_ps = circuit_cfg.interference_window_tau * float(photons.tau.max())
    labels = interference_windows(photons.t0, window_ps)
    sizes = np.bincount(labels)
    size = sizes[labels]

    # windows of two with one photon per input
    first = np.flatnonzero((size == 2) & (np.concatenate([[True], labels[1:] != labels[:-1]])))
    paired = first[input_port[first] != input_port[first + 1]]
    idx_0 = np.where(input_port[paired] == 0, paired, paired + 1)
    idx_1 = np.where(input_port[paired] == 0, paired + 1, paired)

    crowded = int(np.count_nonzero(sizes > 2))
    if crowded:
        logger.debug("%d interference windows hold more than two photons, routed classically", crowded)

    p_0, p_1 = photons.select(idx_0), photons.select(idx_1)
    if overlap_override is None:
        overlap = stream_overlap(p_0, p_1)
    elif callable(overlap_override):
        overlap = np.asarray(overlap_override(p_0, p_1), dtype=np.float64)
    else:
        overlap = np.full(len(paired), float(overlap_override))
    stray = np.isin(p_0.origin, (Origin.STRAY_PULSED, Origin.STRAY_CW)) | np.isin(
        p_1.origin, (Origin.STRAY_PULSED, Origin.STRAY_CW)
    )
    overlap = np.where(stray, 0.0, overlap)

    output = np.full(len(photons), -1, dtype=np.int8)
    output[idx_0], output[idx_1] = fiber_bs_two_photon(p_0, p_1, circuit_cfg.fiber_bs_ratio, overlap, rng)

    single = output < 0
    output[single] = fiber_bs_single(photons.select(single), circuit_cfg.fiber_bs_ratio, rng, input_port[single])
    logger.debug(
        "Fiber beamsplitter: %d interfering pairs, %d classical photons", len(paired), np.count_nonzero(single)
    )
    return photons.select(output == 0), photons.select(output == 1)

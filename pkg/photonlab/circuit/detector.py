r"""
Conversion of photons reaching a detector into time tags.
"""
import logging
from typing import Optional

import numpy as np
from numba import njit

from photonlab.circuit.ledger import DEAD_TIME, DETECTED, DETECTOR_EFFICIENCY, PhotonLedger
from photonlab.core.configs import DetectorConfig
from photonlab.core.functional import PS_PER_S
from photonlab.core.types import PhotonStream, TagStream

logger = logging.getLogger(__name__)


@njit(nogil=True, cache=True)
def dead_time_mask(times: np.ndarray, dead_time_ps: int) -> np.ndarray:
    r""" Keep a sorted event only if it comes at least `dead_time_ps` after the previous kept event. """
    keep = np.zeros(len(times), dtype=np.bool_)
    last = 0
    first = True
    for i in range(len(times)):
        if first or times[i] - last >= dead_time_ps:
            keep[i] = True
            last = times[i]
            first = False
    return keep


def detect(
    photons: PhotonStream,
    config: DetectorConfig,
    duration_ps: int,
    rng: np.random.Generator,
    channel: int = 0,
    ledger: Optional[PhotonLedger] = None,
    start_ps: int = 0,
) -> TagStream:
    r"""
    Time tags of one detector.

    A photon clicks with probability `efficiency` at `t0 + Exp(tau) + N(0, irf_sigma)` (clipped at 0);
    dark counts arrive uniformly over `[start_ps, start_ps + duration_ps)` at `dark_rate_hz`; events closer than
    `dead_time_ps` to the previous accepted one are discarded.
    """
    n = len(photons)
    clicked = rng.random(n) < config.efficiency
    emission = rng.exponential(photons.tau)
    jitter = rng.normal(0.0, config.irf_sigma_ps, n) if config.irf_sigma_ps > 0 else np.zeros(n)
    times = photons.t0 + np.rint(emission + jitter).astype(np.int64)
    times = np.maximum(times[clicked], 0)

    n_dark = rng.poisson(config.dark_rate_hz * duration_ps / PS_PER_S)
    dark = rng.integers(start_ps, start_ps + max(duration_ps, 1), n_dark, dtype=np.int64)

    times = np.concatenate([times, dark])
    is_dark = np.concatenate([np.zeros(len(times) - n_dark, dtype=np.bool_), np.ones(n_dark, dtype=np.bool_)])
    order = np.argsort(times, kind="stable")
    times, is_dark = times[order], is_dark[order]

    if config.dead_time_ps > 0:
        keep = dead_time_mask(times, config.dead_time_ps)
    else:
        keep = np.ones(len(times), dtype=np.bool_)

    if ledger is not None:
        n_clicked = int(np.count_nonzero(clicked))
        dead_photons = int(np.count_nonzero(~keep & ~is_dark))
        ledger.record(DETECTOR_EFFICIENCY, n - n_clicked)
        ledger.record(DEAD_TIME, dead_photons)
        ledger.record(DETECTED, n_clicked - dead_photons)
        ledger.record_dark(DETECTED, int(np.count_nonzero(keep & is_dark)))
        ledger.record_dark(DEAD_TIME, int(np.count_nonzero(~keep & is_dark)))

    logger.debug(
        "Channel %d: %d photons, %d clicks, %d dark counts, %d lost to dead time",
        channel, n, np.count_nonzero(clicked), n_dark, np.count_nonzero(~keep),
    )
    return TagStream.from_times(times[keep], channel=channel)

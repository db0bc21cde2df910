r"""
Deterministic random streams.

Every stochastic operation draws from a `numpy.random.Generator` built on the counter-based Philox bit generator,
keyed by the run seed plus integer keys (a stream kind and, for segmented work, a segment index).
The same keys always give the same numbers, independently of host and of how work is spread over threads.
"""
from enum import IntEnum

import numpy as np


class StreamKind(IntEnum):
    INITIAL_STATE = 1
    BLINKING = 2
    SPECTRAL = 3
    EXCITATION = 4
    REEXCITATION = 5
    STRAY_PULSED = 6
    STRAY_CW = 7
    WAVEGUIDE = 8
    SPLITTER = 9
    INTERFERENCE = 10
    DETECTOR = 11
    SCAN = 12
    SWEEP = 13
    ENSEMBLE = 14
    SUBRUN = 15


def rng_stream(seed: int, *keys: int) -> np.random.Generator:
    r"""
    Independent generator for `(seed, *keys)`.

    >>> rng_stream(7, StreamKind.BLINKING, 0).random() == rng_stream(7, StreamKind.BLINKING, 0).random()
    True
    """
    if seed < 0 or any(int(key) < 0 for key in keys):
        raise ValueError(f"Seed and keys must be non-negative, found {seed} and {keys}")
    sequence = np.random.SeedSequence([int(seed), *(int(key) for key in keys)])
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed: int, *keys: int) -> int:
    r""" Seed of an independent sub-run, e.g. the second polarization of an interference measurement. """
    return int(rng_stream(seed, *keys).integers(0, 2 ** 63 - 1))

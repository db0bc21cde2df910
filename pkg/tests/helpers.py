import logging
from argparse import Namespace

import numpy as np

from photonlab.core.configs import BlinkingConfig, CircuitConfig, DetectorConfig, EmitterConfig
from photonlab.core.types import Origin, PhotonStream, Polarization, TagStream
from photonlab.correlator.histogram import CorrelationHistogram, half_bins
from photonlab.experiments.presets import QdPreset

logging.getLogger("matplotlib").setLevel(logging.ERROR)


standard_args = dict(
    output_dir='/tmp/output',
    name=None,
    version=None,
    seed=3,
    n_pulses=20_000,
    threads=1,
)

# a bright, noise-free emitter on a lossless chip
ideal_emitter = EmitterConfig(tau_ps=201.0)
lossless_circuit = CircuitConfig(mmi_transmission=1.0, path_length_mm=0.0)
ideal_detector = DetectorConfig(irf_sigma_ps=0.0, dark_rate_hz=0.0, dead_time_ps=0, efficiency=1.0)
fast_detector = DetectorConfig(irf_sigma_ps=50.0, dark_rate_hz=0.0, dead_time_ps=0, efficiency=1.0)

blinking_emitter = EmitterConfig(
    tau_ps=201.0,
    blink=BlinkingConfig(k_on_a=2.0, k_off_a=1.0, k_on_b=0.5, k_off_b=0.4),
)

ideal_preset = QdPreset(name="test", emitter=ideal_emitter, circuit=lossless_circuit)


def hyperparameters(**kwargs) -> Namespace:
    return Namespace(**{**standard_args, **kwargs})


def poisson_times(rate_per_ps: float, duration_ps: int, rng: np.random.Generator) -> np.ndarray:
    r""" Sorted uniform arrival times, a Poisson stream of the given rate. """
    n = rng.poisson(rate_per_ps * duration_ps)
    return np.sort(rng.integers(0, duration_ps, n, dtype=np.int64))


def pulsed_poisson_times(
    period_ps: int, n_pulses: int, p_click: float, sigma_ps: float, rng: np.random.Generator
) -> np.ndarray:
    r""" Independent clicks on a pulse train, at most one per pulse, with Gaussian jitter. """
    pulses = np.flatnonzero(rng.random(n_pulses) < p_click)
    times = pulses * period_ps + 1_000 + np.rint(rng.normal(0.0, sigma_ps, len(pulses))).astype(np.int64)
    return np.sort(times)


def brute_force_histogram(a, b, bin_ps: int, range_ps: int, auto: bool = False) -> np.ndarray:
    r""" O(n^2) reference for the correlator. """
    n_half = half_bins(bin_ps, range_ps)
    counts = np.zeros(2 * n_half + 1, dtype=np.uint64)
    for i, t_a in enumerate(a):
        for k, t_b in enumerate(b):
            if auto and i == k:
                continue
            d = int(t_b) - int(t_a)
            if abs(d) > range_ps:
                continue
            j = (2 * abs(d) + bin_ps) // (2 * bin_ps)
            counts[(j if d >= 0 else -j) + n_half] += 1
    return counts


def comb_histogram(
    period_ps: int,
    bin_ps: int,
    range_ps: int,
    side_area: float,
    central_area: float,
    width_ps: float,
) -> CorrelationHistogram:
    r""" Noise-free pulsed correlation: Gaussian peaks at multiples of the period, a different central area. """
    hist = CorrelationHistogram.zeros(bin_ps, range_ps)
    delays = hist.delays.astype(np.float64)
    index = np.rint(delays / period_ps)
    offset = delays - index * period_ps
    area = np.where(index == 0, central_area, side_area)
    counts = area * bin_ps * np.exp(-0.5 * (offset / width_ps) ** 2) / (np.sqrt(2 * np.pi) * width_ps)
    return CorrelationHistogram(bin_ps, range_ps, np.rint(counts).astype(np.uint64), 1, 1)


def photons(t0, tau=201.0, detuning=0.0, polarization=Polarization.H, origin=Origin.SIGNAL) -> PhotonStream:
    t0 = np.asarray(t0, dtype=np.int64)
    n = len(t0)
    return PhotonStream(
        t0=t0,
        tau=np.broadcast_to(tau, (n, )),
        detuning=np.broadcast_to(detuning, (n, )),
        polarization=np.broadcast_to(polarization, (n, )),
        origin=np.broadcast_to(origin, (n, )),
        pulse=np.arange(n),
    )


def two_channel_tags(times_0, times_1) -> TagStream:
    return TagStream.merge(TagStream.from_times(times_0, channel=0), TagStream.from_times(times_1, channel=1))

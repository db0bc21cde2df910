r"""
Segment-wise simulation of the full chain: emitter, on-chip splitter, optional interference stage and detectors.
"""
import logging
from typing import Callable, Optional, Sequence

from photonlab.circuit.detector import detect
from photonlab.circuit.ledger import UNMONITORED, PhotonLedger
from photonlab.circuit.topology import run_hom_topology, split_on_chip
from photonlab.core.configs import CircuitConfig, DetectorConfig, EmitterConfig
from photonlab.core.random import StreamKind, rng_stream
from photonlab.core.types import PhotonStream, TagStream
from photonlab.emitter.pulse_train import DEFAULT_SEGMENT_PULSES, PulseTrainGenerator

logger = logging.getLogger(__name__)

# maps the emitted photons of one segment to the photons reaching each detector
Route = Callable[[PhotonStream, int, Optional[PhotonLedger]], Sequence[PhotonStream]]


def hbt_route(circuit: CircuitConfig, seed: int) -> Route:
    r""" Both MMI outputs go straight to a detector. """

    def route(photons, index, ledger=None):
        return split_on_chip(photons, circuit, rng_stream(seed, StreamKind.SPLITTER, index), ledger)

    return route


def single_route(circuit: CircuitConfig, seed: int) -> Route:
    r""" Only the first MMI output is detected. """

    def route(photons, index, ledger=None):
        arm_0, arm_1 = split_on_chip(photons, circuit, rng_stream(seed, StreamKind.SPLITTER, index), ledger)
        if ledger is not None:
            ledger.record(UNMONITORED, len(arm_1))
        return (arm_0, )

    return route


def hom_route(circuit: CircuitConfig, seed: int, overlap_override=None) -> Route:
    r""" MMI outputs recombined on the fiber beamsplitter after the delay line. """

    def route(photons, index, ledger=None):
        arms = split_on_chip(photons, circuit, rng_stream(seed, StreamKind.SPLITTER, index), ledger)
        return run_hom_topology(
            arms, circuit, rng_stream(seed, StreamKind.INTERFERENCE, index), overlap_override=overlap_override
        )

    return route


def simulate_tags(
    emitter: EmitterConfig,
    circuit: CircuitConfig,
    detector: DetectorConfig,
    route: Route,
    n_pulses: int,
    seed: int,
    channels: Sequence[int] = (0, 1),
    ledger: Optional[PhotonLedger] = None,
    segment_pulses: int = DEFAULT_SEGMENT_PULSES,
) -> TagStream:
    r"""
    Time tags of identical detectors, one per routed output, numbered by `channels`.

    Each segment of pulses is emitted, routed and detected with random streams keyed by its index, so the tags
    depend only on the seed and the segment size. Dark counts are drawn over each segment's time span.
    """
    if n_pulses < 1:
        raise ValueError(f"n_pulses must be at least 1, found {n_pulses}")
    period = circuit.rep_period_ps
    generator = PulseTrainGenerator(emitter, circuit, seed, segment_pulses=segment_pulses)

    tags = []
    for index, photons in enumerate(generator.segments(n_pulses)):
        start = index * segment_pulses
        n = min(segment_pulses, n_pulses - start)
        outputs = route(photons, index, ledger)
        if len(outputs) != len(channels):
            raise ValueError(f"Route gives {len(outputs)} outputs for {len(channels)} channels")
        for channel, output in zip(channels, outputs):
            rng = rng_stream(seed, StreamKind.DETECTOR, index, channel)
            tags.append(
                detect(output, detector, n * period, rng, channel=channel, ledger=ledger, start_ps=start * period)
            )

    if ledger is not None:
        ledger.reconcile()
    merged = TagStream.merge(*tags)
    logger.debug("Simulated %d pulses into %d tags on channels %s", n_pulses, len(merged), tuple(channels))
    return merged

r"""
Pulse-by-pulse photon generation of a resonantly driven emitter.

Generation runs in contiguous segments of `segment_pulses` pulses. Each segment draws from its own random streams,
keyed by the run seed, the stream kind and the segment index, and hands blinking and spectral state to the next
segment through an `EmitterCheckpoint`. Generating segment after segment from checkpoints therefore gives exactly
the same stream as one call to `emit_pulse_train`.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from photonlab.core.configs import CircuitConfig, EmitterConfig
from photonlab.core.functional import PS_PER_S
from photonlab.core.random import StreamKind, rng_stream
from photonlab.core.types import Origin, PhotonStream, Polarization
from photonlab.emitter.blinking import BlinkLevel, BlinkState, blink_trajectory, initial_blink_state, levels_at
from photonlab.emitter.spectral import initial_spectral_state, ou_series

logger = logging.getLogger(__name__)

DEFAULT_SEGMENT_PULSES = 2 ** 20


@dataclass(frozen=True)
class EmitterCheckpoint:
    r"""
    Emitter state between two segments: blinking level, detuning of the last pulse and index of the next pulse.
    """

    blink: BlinkState
    detuning: float
    next_pulse: int = 0


class PulseTrainGenerator:
    r"""
    Generate the photons emitted by a pulsed emitter, one segment at a time.

    Example:

    >>> generator = PulseTrainGenerator(emitter_cfg, circuit_cfg, seed=7)
    >>> first = generator.next_segment(n_pulses=10 ** 7)
    >>> saved = generator.checkpoint
    >>> second = PulseTrainGenerator(emitter_cfg, circuit_cfg, seed=7, checkpoint=saved).next_segment(10 ** 7)
    """

    def __init__(
        self,
        emitter_cfg: EmitterConfig,
        circuit_cfg: CircuitConfig,
        seed: int,
        segment_pulses: int = DEFAULT_SEGMENT_PULSES,
        checkpoint: Optional[EmitterCheckpoint] = None,
    ):
        assert segment_pulses >= 1, f"segment_pulses must be positive, found {segment_pulses}"
        self.emitter_cfg = emitter_cfg
        self.circuit_cfg = circuit_cfg
        self.seed = seed
        self.segment_pulses = segment_pulses
        self._checkpoint = checkpoint if checkpoint is not None else self._initial_checkpoint()

    def _initial_checkpoint(self) -> EmitterCheckpoint:
        rng = rng_stream(self.seed, StreamKind.INITIAL_STATE)
        blink = initial_blink_state(self.emitter_cfg.blink, rng)
        spectral = initial_spectral_state(self.emitter_cfg.sigma_g_ghz, rng)
        return EmitterCheckpoint(blink=blink, detuning=spectral.detuning, next_pulse=0)

    @property
    def checkpoint(self) -> EmitterCheckpoint:
        return self._checkpoint

    def next_segment(self, n_pulses: int) -> PhotonStream:
        r"""
        Photons of the pulses `[next_pulse, next_pulse + n)` where `n` is at most `n_pulses` and never crosses
        a segment boundary. The checkpoint advances accordingly.
        """
        start = self._checkpoint.next_pulse
        if start % self.segment_pulses != 0:
            raise ValueError(
                f"Checkpoint at pulse {start} is not on a segment boundary of {self.segment_pulses} pulses"
            )
        if n_pulses < 1:
            raise ValueError(f"n_pulses must be at least 1, found {n_pulses}")
        n = min(n_pulses, self.segment_pulses)
        photons, self._checkpoint = self._segment(start // self.segment_pulses, start, n)
        return photons

    def segments(self, n_pulses: int) -> Iterator[PhotonStream]:
        r""" Yield the photon stream of each segment until `n_pulses` pulses have been generated in total. """
        stop = self._checkpoint.next_pulse + n_pulses
        while self._checkpoint.next_pulse < stop:
            yield self.next_segment(stop - self._checkpoint.next_pulse)

    def _segment(self, index: int, start: int, n: int):
        emitter, circuit = self.emitter_cfg, self.circuit_cfg
        period = circuit.rep_period_ps
        pulses = np.arange(start, start + n, dtype=np.int64)
        pulse_times = pulses * period
        state = self._checkpoint

        # blinking level at every pulse
        rng = rng_stream(self.seed, StreamKind.BLINKING, index)
        switch_times, switch_levels, blink = blink_trajectory(state.blink, n * period, emitter.blink, rng)
        on = levels_at(pulse_times, BlinkLevel(state.blink.state), switch_times, switch_levels) == BlinkLevel.ON

        # spectral diffusion sampled at every pulse
        if emitter.sigma_g_ghz > 0:
            rng = rng_stream(self.seed, StreamKind.SPECTRAL, index)
            detuning = ou_series(state.detuning, n, period, emitter.sigma_g_ghz, emitter.ou_tc_us, rng)
        else:
            detuning = np.zeros(n)

        # all draws are full length so that the streams stay aligned with pulse indices
        rng = rng_stream(self.seed, StreamKind.EXCITATION, index)
        excited = on & (rng.random(n) < emitter.prep_fidelity)

        rng = rng_stream(self.seed, StreamKind.REEXCITATION, index)
        second = excited & (rng.random(n) < emitter.p_reexcite)
        second_delay = np.rint(rng.exponential(emitter.tau_ps, n)).astype(np.int64)

        rng = rng_stream(self.seed, StreamKind.STRAY_PULSED, index)
        stray_per_pulse = rng.poisson(circuit.stray_pulsed_rate, n)

        rng = rng_stream(self.seed, StreamKind.STRAY_CW, index)
        n_cw = rng.poisson(circuit.stray_cw_rate_hz * n * period / PS_PER_S)
        cw_times = np.sort(rng.integers(pulse_times[0], pulse_times[0] + n * period, n_cw, dtype=np.int64))

        stray_pulses = np.repeat(pulses, stray_per_pulse)
        streams = [
            _photons(pulse_times[excited], emitter.tau_ps, detuning[excited], Origin.SIGNAL, pulses[excited]),
            _photons(
                pulse_times[second] + second_delay[second],
                emitter.tau_ps,
                detuning[second],
                Origin.REEXCITATION,
                pulses[second],
            ),
            _photons(stray_pulses * period, circuit.laser_pulse_ps, 0.0, Origin.STRAY_PULSED, stray_pulses),
            _photons(cw_times, circuit.laser_pulse_ps, 0.0, Origin.STRAY_CW, cw_times // period),
        ]
        photons = PhotonStream.concatenate(streams).sorted()

        logger.debug(
            "Segment %d: %d pulses, %d on, %d signal, %d re-excitation, %d pulsed stray, %d cw stray",
            index, n, np.count_nonzero(on), np.count_nonzero(excited), np.count_nonzero(second),
            len(stray_pulses), n_cw,
        )
        checkpoint = EmitterCheckpoint(
            blink=blink,
            detuning=float(detuning[-1]),
            next_pulse=start + n,
        )
        return photons, checkpoint


def _photons(t0, tau, detuning, origin: Origin, pulse) -> PhotonStream:
    n = len(t0)
    return PhotonStream(
        t0=t0,
        tau=np.full(n, tau),
        detuning=np.broadcast_to(detuning, (n,)).astype(np.float64),
        polarization=np.full(n, Polarization.H),
        origin=np.full(n, origin),
        pulse=pulse,
    )


def emit_pulse_train(
    emitter_cfg: EmitterConfig,
    circuit_cfg: CircuitConfig,
    n_pulses: int,
    seed: int,
    segment_pulses: int = DEFAULT_SEGMENT_PULSES,
) -> PhotonStream:
    r"""
    Time-sorted photons emitted over `n_pulses` laser pulses at times `k * rep_period_ps`.

    On every pulse with the emitter bright, a signal photon starts with probability `prep_fidelity`, carrying the
    current spectral-diffusion detuning. Given that photon, a re-excitation photon follows with probability
    `p_reexcite`, delayed by an exponential lifetime sample. Pulsed stray photons (Poisson, mean
    `stray_pulsed_rate` per pulse) start at pulse times and CW stray photons arrive uniformly at
    `stray_cw_rate_hz`. All photons are polarized along the single dipole that couples to the waveguide mode.
    """
    if n_pulses < 1:
        raise ValueError(f"n_pulses must be at least 1, found {n_pulses}")
    generator = PulseTrainGenerator(emitter_cfg, circuit_cfg, seed, segment_pulses=segment_pulses)
    photons = PhotonStream.concatenate(list(generator.segments(n_pulses)))
    # a re-excitation photon may in principle spill past the first pulse of the next segment
    return photons if photons.is_sorted else photons.sorted()

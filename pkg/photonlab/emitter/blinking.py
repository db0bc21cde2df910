r"""
Three-level blinking chain: a bright level ON and two dark levels OFF_A and OFF_B, each reachable only from ON.
Rates are per µs, times are ps.
"""
import logging
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Tuple

import numpy as np

from photonlab.core.configs import BlinkingConfig
from photonlab.core.exceptions import DomainError
from photonlab.core.functional import PS_PER_US

logger = logging.getLogger(__name__)


class BlinkLevel(IntEnum):
    ON = 0
    OFF_A = 1
    OFF_B = 2


@dataclass(frozen=True)
class BlinkState:
    r"""
    Level of the chain at `time` (ps), entered at `since` (ps).
    """

    state: BlinkLevel = BlinkLevel.ON
    since: float = 0.0
    time: float = 0.0


@dataclass(frozen=True)
class BunchingParameters:
    r"""
    Observable signature of a blinking chain: the side-peak envelope `1 + a1 exp(-|t|/tau_b1) + a2 exp(-|t|/tau_b2)`
    and the on-time fraction `beta = 1 / (1 + a1 + a2)`. Timescales are in µs with `tau_b1 <= tau_b2`.
    """

    beta: float
    tau_b1_us: float
    tau_b2_us: float
    a1: float
    a2: float

    def envelope(self, delay_ps) -> np.ndarray:
        t = np.abs(np.asarray(delay_ps, dtype=np.float64)) / PS_PER_US
        return 1.0 + self.a1 * np.exp(-t / self.tau_b1_us) + self.a2 * np.exp(-t / self.tau_b2_us)


def _exit_rates(rates: BlinkingConfig) -> Tuple[float, float, float]:
    return rates.k_off_a + rates.k_off_b, rates.k_on_a, rates.k_on_b


def generator_matrix(rates: BlinkingConfig) -> np.ndarray:
    r""" Rate matrix Q (per µs) with rows summing to zero, ordered as `BlinkLevel`. """
    return np.array([
        [-(rates.k_off_a + rates.k_off_b), rates.k_off_a, rates.k_off_b],
        [rates.k_on_a, -rates.k_on_a, 0.0],
        [rates.k_on_b, 0.0, -rates.k_on_b],
    ])


def stationary_distribution(rates: BlinkingConfig) -> np.ndarray:
    r""" Long-run probability of each `BlinkLevel`. """
    weights = np.array([
        1.0,
        rates.k_off_a / rates.k_on_a if rates.k_off_a > 0 else 0.0,
        rates.k_off_b / rates.k_on_b if rates.k_off_b > 0 else 0.0,
    ])
    return weights / weights.sum()


def stationary_on_fraction(rates: BlinkingConfig) -> float:
    r""" `1 / (1 + k_off_a / k_on_a + k_off_b / k_on_b)`. """
    return float(stationary_distribution(rates)[BlinkLevel.ON])


def bunching_from_rates(rates: BlinkingConfig) -> BunchingParameters:
    r"""
    Forward map from switching rates to the bunching envelope, through the spectrum of the generator restricted
    to the levels the chain actually visits.
    """
    active = [BlinkLevel.ON] + [
        level for level, k_off in ((BlinkLevel.OFF_A, rates.k_off_a), (BlinkLevel.OFF_B, rates.k_off_b)) if k_off > 0
    ]
    if len(active) == 1:
        return BunchingParameters(beta=1.0, tau_b1_us=math.inf, tau_b2_us=math.inf, a1=0.0, a2=0.0)

    q = generator_matrix(rates)[np.ix_(active, active)]
    pi_on = stationary_on_fraction(rates)
    eigenvalues, vectors = np.linalg.eig(q)
    # the chain is reversible, so its spectrum is real
    eigenvalues = eigenvalues.real
    weights = (vectors[0, :] * np.linalg.inv(vectors)[:, 0]).real

    components = sorted(
        ((-1.0 / lam, w / pi_on) for lam, w in zip(eigenvalues, weights) if lam < -1e-12 * np.abs(eigenvalues).max()),
        key=lambda component: component[0],
    )
    if len(components) == 1:
        (tau, a), = components
        return BunchingParameters(beta=pi_on, tau_b1_us=tau, tau_b2_us=tau, a1=a, a2=0.0)
    (tau1, a1), (tau2, a2) = components
    return BunchingParameters(beta=pi_on, tau_b1_us=tau1, tau_b2_us=tau2, a1=a1, a2=a2)


def _two_level_rates(amplitude: float, tau_us: float) -> Tuple[float, float]:
    # single dark level: envelope amplitude k_off / k_on, decay rate k_off + k_on
    k_on = 1.0 / (tau_us * (1.0 + amplitude))
    return k_on, amplitude * k_on


def blinking_rates_from_bunching(
    beta: float, tau_b1_us: float, tau_b2_us: float, split: float = 0.5
) -> BlinkingConfig:
    r"""
    Switching rates that reproduce an on-time `beta` and two bunching timescales, the total envelope amplitude
    `1 / beta - 1` being shared as `split` on the faster and `1 - split` on the slower component.

    The ON-ON transition probability has the Laplace transform `(z + k_on_a)(z + k_on_b) / (z (z + G1)(z + G2))`,
    so its residues fix the return rates as the roots of a quadratic and the exit rates follow linearly.
    OFF_A is the level with the faster return rate.
    """
    if not 0 < beta <= 1:
        raise DomainError(f"On-time fraction must be in (0, 1], found {beta}")
    if not 0 <= split <= 1:
        raise DomainError(f"Amplitude split must be in [0, 1], found {split}")
    if beta == 1:
        return BlinkingConfig()
    if tau_b1_us <= 0 or tau_b2_us <= 0:
        raise DomainError(f"Bunching timescales must be positive, found {tau_b1_us} and {tau_b2_us} µs")
    if tau_b1_us > tau_b2_us:
        tau_b1_us, tau_b2_us, split = tau_b2_us, tau_b1_us, 1.0 - split

    total = 1.0 / beta - 1.0
    a1, a2 = split * total, (1.0 - split) * total
    if a2 == 0:
        k_on, k_off = _two_level_rates(a1, tau_b1_us)
        return BlinkingConfig(k_on_a=k_on, k_off_a=k_off)
    if a1 == 0:
        k_on, k_off = _two_level_rates(a2, tau_b2_us)
        return BlinkingConfig(k_on_b=k_on, k_off_b=k_off)
    if tau_b1_us == tau_b2_us:
        raise DomainError("Two bunching components need distinct timescales")

    g1, g2 = 1.0 / tau_b1_us, 1.0 / tau_b2_us
    product = beta * g1 * g2
    total_on = (product + g1 ** 2 + beta * a1 * g1 * (g2 - g1)) / g1
    discriminant = total_on ** 2 - 4.0 * product
    if discriminant <= 0:
        raise DomainError(f"No three-level chain reproduces beta={beta}, timescales ({tau_b1_us}, {tau_b2_us}) µs "
                          f"and split {split}")
    k_on_a = 0.5 * (total_on + math.sqrt(discriminant))
    k_on_b = 0.5 * (total_on - math.sqrt(discriminant))
    total_off = g1 + g2 - total_on
    k_off_a = (g1 * g2 - product - k_on_a * total_off) / (k_on_b - k_on_a)
    k_off_b = total_off - k_off_a
    if min(k_on_b, k_off_a, k_off_b) <= 0:
        raise DomainError(f"No three-level chain reproduces beta={beta}, timescales ({tau_b1_us}, {tau_b2_us}) µs "
                          f"and split {split}: rates {k_on_a, k_off_a, k_on_b, k_off_b}")
    logger.debug(
        "Blinking rates for beta=%s: on_a=%s off_a=%s on_b=%s off_b=%s", beta, k_on_a, k_off_a, k_on_b, k_off_b
    )
    return BlinkingConfig(k_on_a=k_on_a, k_off_a=k_off_a, k_on_b=k_on_b, k_off_b=k_off_b)


def _jump(level: BlinkLevel, rates: BlinkingConfig, u: float) -> BlinkLevel:
    if level is BlinkLevel.ON:
        total = rates.k_off_a + rates.k_off_b
        return BlinkLevel.OFF_A if u * total < rates.k_off_a else BlinkLevel.OFF_B
    return BlinkLevel.ON


def _exit_rate_ps(level: BlinkLevel, rates: BlinkingConfig) -> float:
    out_of_on, back_from_a, back_from_b = _exit_rates(rates)
    return (out_of_on, back_from_a, back_from_b)[level] / PS_PER_US


def step_blinking(state: BlinkState, dt_ps: float, rates: BlinkingConfig, rng: np.random.Generator) -> BlinkState:
    r"""
    Evolve the chain by `dt_ps` with exact exponential waiting times.
    """
    if dt_ps <= 0:
        raise DomainError(f"Time step must be positive, found {dt_ps}")
    level, since, now = BlinkLevel(state.state), state.since, state.time
    end = now + dt_ps
    while True:
        rate = _exit_rate_ps(level, rates)
        if rate == 0:
            break
        now += rng.exponential(1.0 / rate)
        if now >= end:
            break
        level, since = _jump(level, rates, rng.random()), now
    return BlinkState(state=level, since=since, time=end)


def blink_trajectory(
    state: BlinkState, duration_ps: float, rates: BlinkingConfig, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray, BlinkState]:
    r"""
    Event-driven path of the chain over `[state.time, state.time + duration_ps)`.

    Returns the switching times, the level entered at each switch and the state at the end of the interval.
    The level at any time `t` is `levels[searchsorted(times, t, 'right') - 1]`, or `state.state` before
    the first switch.
    """
    level, since, now = BlinkLevel(state.state), state.since, state.time
    end = now + duration_ps
    times, levels = [], []
    while True:
        rate = _exit_rate_ps(level, rates)
        if rate == 0:
            break
        now += rng.exponential(1.0 / rate)
        if now >= end:
            break
        level, since = _jump(level, rates, rng.random()), now
        times.append(now)
        levels.append(level)
    return (
        np.asarray(times, dtype=np.float64),
        np.asarray(levels, dtype=np.int8),
        BlinkState(state=level, since=since, time=end),
    )


def levels_at(times_ps: np.ndarray, initial: BlinkLevel, switch_times: np.ndarray, switch_levels: np.ndarray):
    r""" Sample a trajectory from `blink_trajectory` at the given times. """
    path = np.concatenate([[int(initial)], switch_levels]).astype(np.int8)
    return path[np.searchsorted(switch_times, times_ps, side="right")]


def initial_blink_state(rates: BlinkingConfig, rng: np.random.Generator, time: float = 0.0) -> BlinkState:
    r""" A level drawn from the stationary distribution. """
    level = BlinkLevel(int(rng.choice(3, p=stationary_distribution(rates))))
    return BlinkState(state=level, since=time, time=time)

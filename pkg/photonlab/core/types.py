import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from photonlab.core.exceptions import DomainError, UnsortedTagsError

MAX_TIME_PS = 2 ** 63


class Polarization(IntEnum):
    H = 0
    V = 1


class Origin(IntEnum):
    SIGNAL = 0
    REEXCITATION = 1
    STRAY_PULSED = 2
    STRAY_CW = 3


@dataclass(frozen=True)
class Measurement:
    r"""
    A derived quantity with its 1-sigma uncertainty.
    """

    value: float
    error: float = 0.0

    def __post_init__(self):
        if not (self.error >= 0 or math.isnan(self.error)):
            raise DomainError(f"Uncertainty must be non-negative, found {self.error}")

    def within(self, target: float, tolerance: float) -> bool:
        return abs(self.value - target) <= tolerance

    def to_dict(self) -> Dict[str, float]:
        return dict(value=float(self.value), error=float(self.error))

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return f"{self.value:.6g} ± {self.error:.2g}"


# fit parameters and derived metrics share the same representation
ParamEstimate = Measurement


@dataclass(frozen=True)
class FitResult:
    r"""
    Outcome of any least-squares fit. A fit that fails is still returned, with `converged=False`
    and a `message`; `flags` collect data-quality warnings that do not invalidate the estimates.
    """

    params: Dict[str, ParamEstimate]
    chi2_reduced: float
    converged: bool
    n_points: int
    message: str = ""
    flags: Tuple[str, ...] = ()
    covariance: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __getitem__(self, name: str) -> ParamEstimate:
        return self.params[name]

    def __contains__(self, name: str) -> bool:
        return name in self.params

    def value(self, name: str) -> float:
        return self.params[name].value

    def values(self) -> Dict[str, float]:
        return {name: estimate.value for name, estimate in self.params.items()}

    @property
    def ok(self) -> bool:
        return self.converged and not self.flags

    def with_params(self, **params: ParamEstimate) -> "FitResult":
        r""" Return a copy with extra (derived) parameters. """
        return FitResult(
            params={**self.params, **params},
            chi2_reduced=self.chi2_reduced,
            converged=self.converged,
            n_points=self.n_points,
            message=self.message,
            flags=self.flags,
            covariance=self.covariance,
        )

    def with_flags(self, *flags: str) -> "FitResult":
        merged = tuple(dict.fromkeys(self.flags + tuple(flags)))
        return FitResult(
            params=self.params,
            chi2_reduced=self.chi2_reduced,
            converged=self.converged,
            n_points=self.n_points,
            message=self.message,
            flags=merged,
            covariance=self.covariance,
        )

    def to_dict(self) -> Dict:
        return dict(
            params={name: estimate.to_dict() for name, estimate in self.params.items()},
            chi2_reduced=float(self.chi2_reduced),
            converged=bool(self.converged),
            n_points=int(self.n_points),
            message=self.message,
            flags=list(self.flags),
        )


@dataclass(frozen=True)
class TimeTag:
    r""" A detector click: channel id and absolute time in ps since the start of the run. """

    channel: int
    time: int

    def __post_init__(self):
        if not 0 <= self.channel < 256:
            raise DomainError(f"Channel must fit in an unsigned byte, found {self.channel}")
        if not 0 <= self.time < MAX_TIME_PS:
            raise DomainError(f"Tag time must be in [0, 2^63) ps, found {self.time}")


@dataclass(frozen=True)
class TagStream:
    r"""
    Columnar collection of time tags ordered by time. Times are stored as unsigned 64-bit picoseconds.
    """

    channels: np.ndarray
    times: np.ndarray

    def __post_init__(self):
        channels = np.asarray(self.channels, dtype=np.uint8)
        times = np.asarray(self.times, dtype=np.uint64)
        if channels.shape != times.shape or channels.ndim != 1:
            raise ValueError(
                f"Channels and times must be 1-D arrays of equal length, found {channels.shape} and {times.shape}"
            )
        if len(times) and times.max() >= np.uint64(MAX_TIME_PS):
            raise DomainError("Tag times must be below 2^63 ps")
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "times", times)

    @classmethod
    def empty(cls) -> "TagStream":
        return cls(np.zeros(0, dtype=np.uint8), np.zeros(0, dtype=np.uint64))

    @classmethod
    def from_times(cls, times: Sequence[int], channel: int = 0) -> "TagStream":
        times = np.asarray(times, dtype=np.uint64)
        return cls(np.full(len(times), channel, dtype=np.uint8), times)

    @classmethod
    def from_tags(cls, tags: Iterable[TimeTag]) -> "TagStream":
        tags = list(tags)
        return cls(
            np.fromiter((tag.channel for tag in tags), dtype=np.uint8, count=len(tags)),
            np.fromiter((tag.time for tag in tags), dtype=np.uint64, count=len(tags)),
        )

    @classmethod
    def merge(cls, *streams: "TagStream") -> "TagStream":
        r""" Merge streams into one ordered by time. Ties keep the order of the arguments. """
        if not streams:
            return cls.empty()
        channels = np.concatenate([stream.channels for stream in streams])
        times = np.concatenate([stream.times for stream in streams])
        order = np.argsort(times, kind="stable")
        return cls(channels[order], times[order])

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self):
        for channel, time in zip(self.channels, self.times):
            yield TimeTag(int(channel), int(time))

    def channel(self, channel: int) -> np.ndarray:
        r""" Times of one channel as a signed 64-bit array, ready for delay arithmetic. """
        return self.times[self.channels == channel].astype(np.int64)

    @property
    def channel_ids(self) -> Tuple[int, ...]:
        return tuple(int(c) for c in np.unique(self.channels))

    @property
    def duration_ps(self) -> int:
        return int(self.times.max()) + 1 if len(self.times) else 0

    def validate(self) -> "TagStream":
        r""" Raise `UnsortedTagsError` if any channel goes back in time. """
        for channel in self.channel_ids:
            index = first_unsorted_index(self.times[self.channels == channel])
            if index is not None:
                raise UnsortedTagsError(f"Tags of channel {channel} go back in time at position {index}", index)
        return self


def first_unsorted_index(times: np.ndarray) -> Optional[int]:
    r""" Position of the first element smaller than its predecessor, or None. """
    if len(times) < 2:
        return None
    times = np.asarray(times)
    decreasing = np.flatnonzero(times[1:] < times[:-1])
    return int(decreasing[0]) + 1 if len(decreasing) else None


@dataclass(frozen=True)
class PhotonPacket:
    r"""
    A single-photon wave packet. `t0` is the start of the packet in ps, `tau` its intensity decay constant in ps
    and `detuning` its center frequency offset in GHz.
    """

    t0: int
    tau: float
    detuning: float = 0.0
    polarization: Polarization = Polarization.H
    origin: Origin = Origin.SIGNAL
    pulse: int = -1

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError(f"Wave packet decay time must be positive, found {self.tau}")
        if not math.isfinite(self.detuning):
            raise DomainError(f"Detuning must be finite, found {self.detuning}")


_PHOTON_COLUMNS = (
    ("t0", np.int64),
    ("tau", np.float64),
    ("detuning", np.float64),
    ("polarization", np.int8),
    ("origin", np.int8),
    ("pulse", np.int64),
)


@dataclass(frozen=True)
class PhotonStream:
    r"""
    Columnar stream of `PhotonPacket`s. Every column is a 1-D numpy array of the same length.
    """

    t0: np.ndarray
    tau: np.ndarray
    detuning: np.ndarray
    polarization: np.ndarray
    origin: np.ndarray
    pulse: np.ndarray

    def __post_init__(self):
        length = None
        for name, dtype in _PHOTON_COLUMNS:
            column = np.asarray(getattr(self, name), dtype=dtype)
            if column.ndim != 1:
                raise ValueError(f"Column {name} must be 1-D, found shape {column.shape}")
            if length is None:
                length = len(column)
            elif len(column) != length:
                raise ValueError(f"Column {name} has length {len(column)}, expected {length}")
            object.__setattr__(self, name, column)

    @classmethod
    def empty(cls) -> "PhotonStream":
        return cls(*(np.zeros(0, dtype=dtype) for _, dtype in _PHOTON_COLUMNS))

    @classmethod
    def from_packets(cls, packets: Iterable[PhotonPacket]) -> "PhotonStream":
        packets = list(packets)
        return cls(
            *(
                np.fromiter((int(getattr(p, name)) if dtype is not np.float64 else getattr(p, name)
                             for p in packets), dtype=dtype, count=len(packets))
                for name, dtype in _PHOTON_COLUMNS
            )
        )

    @classmethod
    def coerce(cls, photons) -> "PhotonStream":
        r""" Promote a single packet or a sequence of packets to a stream. """
        if isinstance(photons, PhotonStream):
            return photons
        if isinstance(photons, PhotonPacket):
            return cls.from_packets([photons])
        return cls.from_packets(photons)

    @classmethod
    def concatenate(cls, streams: Sequence["PhotonStream"]) -> "PhotonStream":
        streams = list(streams)
        if not streams:
            return cls.empty()
        return cls(*(np.concatenate([getattr(s, name) for s in streams]) for name, _ in _PHOTON_COLUMNS))

    def __len__(self) -> int:
        return len(self.t0)

    def __iter__(self):
        for i in range(len(self)):
            yield self.packet(i)

    def packet(self, i: int) -> PhotonPacket:
        return PhotonPacket(
            t0=int(self.t0[i]),
            tau=float(self.tau[i]),
            detuning=float(self.detuning[i]),
            polarization=Polarization(int(self.polarization[i])),
            origin=Origin(int(self.origin[i])),
            pulse=int(self.pulse[i]),
        )

    def select(self, index) -> "PhotonStream":
        r""" Sub-stream from a boolean mask or an integer index array. """
        return PhotonStream(*(getattr(self, name)[index] for name, _ in _PHOTON_COLUMNS))

    def replace(self, **columns) -> "PhotonStream":
        values = {name: columns.get(name, getattr(self, name)) for name, _ in _PHOTON_COLUMNS}
        return PhotonStream(**values)

    def sorted(self) -> "PhotonStream":
        r""" Order by start time, ties broken by origin. """
        return self.select(np.lexsort((self.origin, self.t0)))

    def count(self, origin: Origin = None) -> int:
        if origin is None:
            return len(self)
        return int(np.count_nonzero(self.origin == origin))

    @property
    def is_sorted(self) -> bool:
        return first_unsorted_index(self.t0) is None

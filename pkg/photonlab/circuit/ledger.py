import logging
from collections import Counter
from typing import Dict

logger = logging.getLogger(__name__)

DETECTED = "detected"
WAVEGUIDE = "waveguide"
MMI = "mmi"
DETECTOR_EFFICIENCY = "detector_efficiency"
DEAD_TIME = "dead_time"
UNMONITORED = "unmonitored_port"


class PhotonLedger:
    r"""
    Bookkeeping of where the photons of a run went. Every photon that enters the circuit must end up either
    detected or in exactly one loss cause.

    >>> ledger = PhotonLedger()
    >>> ledger.add_input(10)
    >>> ledger.record(WAVEGUIDE, 4)
    >>> ledger.record(DETECTED, 6)
    >>> ledger.reconcile()
    """

    def __init__(self):
        self.inputs = 0
        self.outcomes = Counter()
        self.dark_counts = Counter()

    def add_input(self, n: int):
        self.inputs += int(n)

    def record(self, cause: str, n: int):
        if n < 0:
            raise ValueError(f"Cannot record a negative number of photons for {cause}: {n}")
        self.outcomes[cause] += int(n)

    def record_dark(self, cause: str, n: int):
        r""" Dark counts are tracked apart: they never entered the circuit. """
        self.dark_counts[cause] += int(n)

    @property
    def detected(self) -> int:
        return self.outcomes[DETECTED]

    @property
    def losses(self) -> Dict[str, int]:
        return {cause: n for cause, n in self.outcomes.items() if cause != DETECTED}

    def reconcile(self):
        r""" Raise if inputs and outcomes do not balance exactly. """
        accounted = sum(self.outcomes.values())
        if accounted != self.inputs:
            raise ValueError(
                f"Photon ledger does not balance: {self.inputs} in, {accounted} accounted {dict(self.outcomes)}"
            )
        logger.debug("Photon ledger: %d in, %s", self.inputs, dict(self.outcomes))

    def to_dict(self) -> Dict[str, int]:
        return dict(inputs=self.inputs, **self.outcomes, **{f"dark_{k}": v for k, v in self.dark_counts.items()})

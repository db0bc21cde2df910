r"""
Outcome of one scenario run: metrics with their errors, checks against the measured values, data-quality flags and
paths of the written artifacts.
"""
import hashlib
import json
import math
import os
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator

from photonlab.core.types import Measurement

REPORT_SCHEMA_VERSION = 1
REPORT_SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "report_schema.json")


def _finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


class MetricValue(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    value: Optional[float]
    error: Optional[float] = None

    @field_validator("value", "error", mode="before")
    @classmethod
    def finite_or_none(cls, value):
        return _finite_or_none(value)

    @classmethod
    def from_measurement(cls, measurement: Measurement) -> "MetricValue":
        return cls(value=measurement.value, error=measurement.error)


class ExperimentReport(BaseModel):
    r"""
    Re-running a scenario with the same configuration and seed reproduces the same `digest()`.
    Non-finite numbers are stored as `null`.
    """

    model_config = ConfigDict(extra="forbid")

    schema_version: int = REPORT_SCHEMA_VERSION
    scenario: str
    preset: Optional[str] = None
    seed: int
    config: Dict[str, Any] = {}
    metrics: Dict[str, MetricValue] = {}
    checks: Dict[str, bool] = {}
    flags: List[str] = []
    artifacts: Dict[str, str] = {}
    details: Dict[str, Any] = {}

    # written next to the report by `ReportLogger`, never serialized
    _histograms: Dict[str, Any] = PrivateAttr(default_factory=dict)
    _figures: Dict[str, Any] = PrivateAttr(default_factory=dict)

    @property
    def histograms(self) -> Dict[str, Any]:
        r""" Objects with a `to_csv(path)` method, by artifact name. """
        return self._histograms

    @property
    def figures(self) -> Dict[str, Any]:
        r""" Objects with a `draw(path)` method, by artifact name. """
        return self._figures

    def add_metric(self, name: str, measurement: Measurement):
        self.metrics[name] = MetricValue.from_measurement(measurement)

    def add_flags(self, *flags: str):
        for flag in flags:
            if flag not in self.flags:
                self.flags.append(flag)

    def metric(self, name: str) -> Optional[float]:
        return self.metrics[name].value

    def check_against(self, expected: Dict) -> Dict[str, bool]:
        r""" Compare every metric that has an expected value (an object with a `check(value)` method). """
        for name, target in expected.items():
            if name in self.metrics and self.metrics[name].value is not None:
                self.checks[name] = bool(target.check(self.metrics[name].value))
        return self.checks

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def digest(self) -> str:
        r""" SHA-256 over scenario, configuration, seed and metrics. """
        payload = dict(
            scenario=self.scenario,
            config=self.config,
            seed=self.seed,
            metrics={name: metric.model_dump() for name, metric in self.metrics.items()},
        )
        return hashlib.sha256(json.dumps(payload, sort_keys=True, default=str).encode("utf-8")).hexdigest()

    def save(self, path: str):
        with open(path, "w") as fo:
            fo.write(self.model_dump_json(indent=2))

    @classmethod
    def load(cls, path: str) -> "ExperimentReport":
        with open(path, "r") as fi:
            return cls.model_validate_json(fi.read())


def load_report_schema() -> Dict:
    with open(REPORT_SCHEMA_PATH, "r") as fi:
        return json.load(fi)

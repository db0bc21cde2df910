from abc import ABC, abstractmethod
from argparse import ArgumentParser, Namespace
from typing import Any, Optional, Union

from photonlab.core.configs import DetectorConfig
from photonlab.core.types import TagStream
from photonlab.experiments.presets import QdPreset, get_preset
from photonlab.experiments.report import ExperimentReport


def start_report(scenario: str, preset: QdPreset, seed: int, detector: Optional[DetectorConfig] = None,
                 **options) -> ExperimentReport:
    r""" Empty report holding the snapshot of everything the metrics depend on. """
    config = dict(
        emitter=preset.emitter.model_dump(mode="json"),
        circuit=preset.circuit.model_dump(mode="json"),
        options={name: value for name, value in options.items() if value is not None},
    )
    if detector is not None:
        config["detector"] = detector.model_dump(mode="json")
    return ExperimentReport(scenario=scenario, preset=preset.name, seed=seed, config=config)


class SuperExperiment(ABC):
    r"""
    SuperExperiment should be the superclass of every scenario. A scenario first simulates its raw data
    (time tags or a scan) and then analyzes them into an `ExperimentReport`, so that the same analysis
    also runs on tags recorded elsewhere.

    Example:

    >>> experiment = HbtExperiment(hyperparameters)
    >>> report = experiment.run()

    >>> report = experiment.analyze(read_tags("run.ptag"))
    """

    name: str = None
    uses_tags: bool = False
    default_detector: Optional[DetectorConfig] = None

    def __init__(self, hyperparameters: Namespace):
        self.hyperparameters = hyperparameters
        preset = getattr(hyperparameters, "preset", None) or "ideal"
        self.preset = preset if isinstance(preset, QdPreset) else get_preset(preset)
        self.detector = getattr(hyperparameters, "detector", None) or self.default_detector

    @property
    def seed(self) -> int:
        return int(self.option("seed", 0))

    @property
    def threads(self) -> Optional[int]:
        return getattr(self.hyperparameters, "threads", None)

    def pulses(self, default: int) -> int:
        r""" Number of pulses to simulate; the value is kept in the hyperparameters so `analyze` uses the same. """
        self.hyperparameters.n_pulses = self.option("n_pulses", default)
        return self.hyperparameters.n_pulses

    def option(self, name: str, default: Any = None) -> Any:
        r""" Scenario option from the hyperparameters, `default` when missing or None. """
        value = getattr(self.hyperparameters, name, None)
        return default if value is None else value

    @abstractmethod
    def simulate(self) -> Union[TagStream, Any]:
        r""" Raw data of the scenario: time tags when `uses_tags`, otherwise the scenario's own data type. """

    @abstractmethod
    def analyze(self, data) -> ExperimentReport:
        r""" Turn the raw data into a report checked against the preset's expected metrics. """

    def run(self) -> ExperimentReport:
        return self.analyze(self.simulate())

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        parser.add_argument('--preset', type=str, required=False, default=None, help='Name of the emitter preset')
        parser.add_argument('--seed', type=int, required=False, default=None, help='Seed of every random stream')
        parser.add_argument(
            '--n-pulses', type=int, required=False, default=None, help='Number of laser pulses to simulate'
        )
        parser.add_argument(
            '--threads',
            type=int,
            required=False,
            default=None,
            help='Worker threads for the correlator, defaults to the PHOTONLAB_THREADS environment variable'
        )

import sys
from typing import Dict, Type

from photonlab.core.exceptions import ConfigError
from photonlab.experiments.characterization import (  # noqa: F401
    AttenuationExperiment,
    MmiSplitExperiment,
    run_attenuation,
    run_mmi_split,
)
from photonlab.experiments.ensemble import (  # noqa: F401
    DEFAULT_DISTRIBUTIONS,
    EnsembleExperiment,
    NormalDistribution,
    run_ensemble,
)
from photonlab.experiments.fpi import FpiExperiment, analyze_fpi, run_fpi, simulate_fpi  # noqa: F401
from photonlab.experiments.hbt import HbtExperiment, analyze_hbt, run_hbt, simulate_hbt  # noqa: F401
from photonlab.experiments.hom import HomExperiment, analyze_hom, run_hom, simulate_hom  # noqa: F401
from photonlab.experiments.presets import (  # noqa: F401
    ExpectedMetric,
    QdPreset,
    derive_preset,
    get_preset,
    list_presets,
)
from photonlab.experiments.rabi import RabiExperiment, analyze_rabi, run_rabi, simulate_rabi  # noqa: F401
from photonlab.experiments.report import ExperimentReport, MetricValue, load_report_schema  # noqa: F401
from photonlab.experiments.super_experiment import SuperExperiment  # noqa: F401
from photonlab.experiments.tcspc import TcspcExperiment, analyze_tcspc, run_tcspc, simulate_tcspc  # noqa: F401
from photonlab.utils.inspectors import get_classes_from_module


def experiment_classes() -> Dict[str, Type[SuperExperiment]]:
    r""" Every scenario by name. """
    return get_classes_from_module(sys.modules[__name__], parent=SuperExperiment, key="name")


def get_experiment_class(name: str) -> Type[SuperExperiment]:
    classes = experiment_classes()
    try:
        return classes[name]
    except KeyError:
        raise ConfigError(f"Unknown scenario '{name}', available: {', '.join(sorted(classes))}") from None

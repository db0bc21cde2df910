import json
import logging
import os
from argparse import ArgumentParser, Namespace
from io import TextIOWrapper
from typing import Any, Dict, Optional, Union

import numpy as np
from pytorch_lightning.loggers.logger import Logger, rank_zero_experiment
try:
    from pytorch_lightning.utilities.cloud_io import get_filesystem
except ImportError:  # pytorch-lightning >= 2.0 moved it to lightning_fabric
    from lightning_fabric.utilities.cloud_io import get_filesystem
from pytorch_lightning.utilities.rank_zero import rank_zero_only

from photonlab.utils.functional import flatten_dict

logger = logging.getLogger(__name__)


class ReportLogger(Logger):
    r"""
    Write the outcome of scenario runs to the local file system.

    Every run gets its own folder ``os.path.join(output_dir, name, version_<n>)`` holding
    ``metrics.jsonl`` (one line per `log_metrics` call), ``hparams.json`` (configuration snapshot),
    ``meta.json`` (scenario, seed, schema version), ``report.json`` and the histograms (CSV), figures (SVG)
    and tag files attached to the report.

    Example:

    >>> report_logger = ReportLogger(Namespace(output_dir="outputs", name="hbt"))
    >>> report_logger.log_report(report)

    Args:
        hyperparameters: Namespace with at least `output_dir` and `name`.
    """

    NAME_OUTPUT_FILE = "metrics.jsonl"
    NAME_HPARAMS_FILE = "hparams.json"
    NAME_METADATA_FILE = "meta.json"
    NAME_REPORT_FILE = "report.json"

    def __init__(self, hyperparameters: Namespace):
        super().__init__()
        self.hyperparameters = hyperparameters
        self._version = None
        self._fs = get_filesystem(hyperparameters.output_dir)
        self._experiment = None
        self._step = 0

    def reset(self):
        r""" Reset experiment. """
        self._experiment = None

    @property
    def root_dir(self) -> str:
        r""" Parent directory of all the versions of this scenario. """
        return os.path.join(self.save_dir, self.name)

    @property
    def log_dir(self) -> str:
        r""" The directory of this run, named ``'version_${self.version}'``. """
        version = self.version if isinstance(self.version, str) else f"version_{self.version}"
        log_dir = os.path.join(self.root_dir, version)
        log_dir = os.path.expandvars(log_dir)
        log_dir = os.path.expanduser(log_dir)
        return log_dir

    @property
    def save_dir(self) -> str:
        return self.hyperparameters.output_dir

    @property
    @rank_zero_experiment
    def experiment(self) -> TextIOWrapper:
        r""" Open handle on the metrics file of this run. """
        if self._experiment is not None:
            return self._experiment

        self._fs.makedirs(self.log_dir, exist_ok=True)
        filename = os.path.join(self.log_dir, self.NAME_OUTPUT_FILE)
        self._experiment = open(filename, "a")
        return self._experiment

    def _update_json(self, filename: str, params: Union[Dict[str, Any], Namespace, None]):
        params = vars(params) if isinstance(params, Namespace) else dict(params or {})
        params = self._sanitize_params(flatten_dict(params))

        self._fs.makedirs(self.log_dir, exist_ok=True)
        filename = os.path.join(self.log_dir, filename)
        if os.path.isfile(filename):
            # going to update existing file
            with open(filename, "r") as fh:
                params = {**json.load(fh), **params}

        with open(filename, "w") as fh:
            json.dump(params, fh, indent=2, sort_keys=True)

    @rank_zero_only
    def log_hyperparams(self, params: Union[Dict[str, Any], Namespace] = None) -> None:
        r""" Record the configuration snapshot. """
        self._update_json(self.NAME_HPARAMS_FILE, params)

    @rank_zero_only
    def log_metadata(self, metadata: Union[Dict[str, Any], Namespace] = None) -> None:
        r""" Record scenario, seed and schema version. """
        self._update_json(self.NAME_METADATA_FILE, metadata)

    @rank_zero_only
    def log_metrics(self, metrics: Dict[str, float], step: Optional[int] = None) -> None:
        r""" Append one line of metrics. """
        if step is None:
            step = self._step
        self._step = step + 1
        if metrics:
            try:
                line = dict(step=step, **{k: self._to_builtin(v) for k, v in metrics.items()})
                self.experiment.write(json.dumps(line) + "\n")
            except TypeError as ex:
                raise ValueError(f"\n you tried to log {metrics} which is not currently supported.") from ex

    @rank_zero_only
    def log_report(self, report, tags=None, tag_format: str = "ptag") -> str:
        r"""
        Write a report with everything attached to it: histograms as CSV, figures as SVG and, when given,
        the time tags. The paths are stored in `report.artifacts` (relative to the run folder) before the report
        itself is written.

        Returns:
            the path of the written report
        """
        from photonlab.adapters import write_tags

        self._fs.makedirs(self.log_dir, exist_ok=True)
        for name, histogram in report.histograms.items():
            filename = f"{name}.csv"
            histogram.to_csv(os.path.join(self.log_dir, filename))
            report.artifacts[f"{name}_csv"] = filename
        for name, figure in report.figures.items():
            filename = f"{name}.svg"
            figure.draw(os.path.join(self.log_dir, filename))
            report.artifacts[f"{name}_svg"] = filename
        if tags is not None:
            filename = f"tags.{tag_format}"
            write_tags(os.path.join(self.log_dir, filename), tags, tag_format=tag_format)
            report.artifacts["tags"] = filename

        self.log_metadata(dict(scenario=report.scenario, seed=report.seed, schema_version=report.schema_version,
                               preset=report.preset))
        self.log_hyperparams(report.config)
        self.log_metrics({name: metric.value for name, metric in report.metrics.items()})

        path = os.path.join(self.log_dir, self.NAME_REPORT_FILE)
        report.save(path)
        logger.info("Report written to %s", path)
        return path

    @rank_zero_only
    def finalize(self, status: str):
        r""" Flush and close the metrics file. """
        if self._experiment is not None:
            self._experiment.flush()
            self._experiment.close()
        self.reset()

    @property
    def name(self) -> str:
        return self.hyperparameters.name

    @property
    def version(self) -> int:
        r""" The experiment version if specified else the next free one. """
        if self._version is None:
            self._version = getattr(self.hyperparameters, "version", None)
        if self._version is None:
            self._version = self._get_next_version()
        return self._version

    def _get_next_version(self):
        root_dir = self.root_dir

        try:
            listdir_info = self._fs.listdir(root_dir)
        except OSError:
            logger.debug("Missing logger folder: %s", root_dir)
            return 0

        existing_versions = []
        for listing in listdir_info:
            d = listing["name"]
            bn = os.path.basename(d)
            if self._fs.isdir(d) and bn.startswith("version_"):
                dir_ver = bn.split("_")[1].replace("/", "")
                existing_versions.append(int(dir_ver))
        if len(existing_versions) == 0:
            return 0

        return max(existing_versions) + 1

    @staticmethod
    def _to_builtin(value):
        if isinstance(value, np.generic):
            return value.item()
        return value

    @classmethod
    def _sanitize_params(cls, params: Dict[str, Any]) -> Dict[str, Any]:
        sanitized = {}
        for key, value in params.items():
            value = cls._to_builtin(value)
            if isinstance(value, np.ndarray):
                value = value.tolist()
            elif not isinstance(value, (bool, int, float, str, list, type(None))):
                value = str(value)
            sanitized[key] = value
        return sanitized

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_experiment"] = None
        return state

    def __setstate__(self, state: Dict[Any, Any]):
        del state["_experiment"]
        self._experiment = None
        self.__dict__.update(state)

    @staticmethod
    def add_argparse_args(parser: ArgumentParser):
        r""" Add logger specific arguments to parser. """
        parser.add_argument('--version', type=int, required=False, default=None, help="Version folder to write to.")

r"""
Run configuration: scenario, preset with optional inline overrides, seed, size of the run and output folder.
TOML is the native format; YAML and JSON files are read the same way.
"""
import os
from typing import Any, Dict, Optional

import yaml
from pydantic import Field, ValidationError, field_validator

from photonlab.core.configs import CircuitConfig, DetectorConfig, EmitterConfig, FrozenModel
from photonlab.core.exceptions import ConfigError
from photonlab.experiments.presets import QdPreset, get_preset
from photonlab.utils.readers import dumps_toml, load_config_file

RUN_CONFIG_SCHEMA_VERSION = 1
DEFAULT_PRESET = "ideal"


class RunConfig(FrozenModel):
    r"""
    Everything a run depends on. `emitter`, `circuit` and `detector` override the given fields of the preset (or
    of the scenario's detector); scenario-specific settings go in `options`.
    """

    schema_version: int = RUN_CONFIG_SCHEMA_VERSION
    scenario: str = "hbt"
    preset: Optional[str] = None
    emitter: Optional[EmitterConfig] = None
    circuit: Optional[CircuitConfig] = None
    detector: Optional[DetectorConfig] = None
    seed: int = Field(0, ge=0, lt=2 ** 64)
    n_pulses: Optional[int] = Field(None, ge=1)
    out: str = "outputs"
    threads: Optional[int] = Field(None, ge=1)
    options: Dict[str, Any] = {}

    @field_validator("schema_version")
    @classmethod
    def supported_version(cls, value: int) -> int:
        if value != RUN_CONFIG_SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {value}, expected {RUN_CONFIG_SCHEMA_VERSION}")
        return value

    def resolve_preset(self) -> QdPreset:
        r""" The named preset with the inline emitter and circuit fields applied. """
        preset = get_preset(self.preset or DEFAULT_PRESET)
        update = {}
        if self.emitter is not None:
            update["emitter"] = _override(preset.emitter, self.emitter)
        if self.circuit is not None:
            update["circuit"] = _override(preset.circuit, self.circuit)
        return preset.model_copy(update=update) if update else preset

    def resolve_detector(self, default: Optional[DetectorConfig]) -> Optional[DetectorConfig]:
        if self.detector is None:
            return default
        return _override(default, self.detector) if default is not None else self.detector

    def to_toml(self) -> str:
        return dumps_toml(self.model_dump(mode="json"))


def _override(base: FrozenModel, override: FrozenModel) -> FrozenModel:
    r""" `base` with the fields explicitly set in `override`; nested models are replaced as a whole. """
    given = override.model_dump(include=set(override.model_fields_set))
    return type(base).model_validate({**base.model_dump(), **given})


def load_run_config(path: str, **overrides) -> RunConfig:
    r"""
    Read and validate a run configuration; `overrides` (non-None values only) take precedence over the file.

    Raises:
        ConfigError: the file is missing, unreadable or invalid; the message names the location of each
            offending key, e.g. `emitter.blink.k_on_c: Extra inputs are not permitted`
    """
    data = {}
    if path is not None:
        if not os.path.isfile(path):
            raise ConfigError(f"Config file {path} does not exist")
        try:
            data = load_config_file(path)
        except (ValueError, yaml.YAMLError) as ex:
            raise ConfigError(f"Cannot read {path}: {ex}") from ex
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must hold a table of settings")
    data.update({name: value for name, value in overrides.items() if value is not None})
    return validate_run_config(data, source=path)


def validate_run_config(data: Dict[str, Any], source: Optional[str] = None) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as ex:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}" for error in ex.errors()
        )
        raise ConfigError(f"Invalid configuration{f' in {source}' if source else ''}: {problems}") from None


def default_config_toml() -> str:
    r""" Every field of the run configuration with its default, the emitter and circuit of the default preset. """
    preset = get_preset(DEFAULT_PRESET)
    config = RunConfig(emitter=preset.emitter, circuit=preset.circuit, detector=DetectorConfig())
    return config.to_toml()

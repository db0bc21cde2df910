import json
import os
import sys
from typing import Any, Dict

import tomli_w
import yaml

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def load_yaml(filename: str) -> Dict[str, Any]:
    with open(filename, 'r') as infile:
        return yaml.safe_load(infile.read())


def load_json(filename: str) -> Dict[str, Any]:
    with open(filename, 'r') as infile:
        return json.load(infile)


def load_toml(filename: str) -> Dict[str, Any]:
    r"""
    Load a toml document. Invalid documents raise `tomllib.TOMLDecodeError`, a `ValueError`.
    """
    with open(filename, 'rb') as infile:
        return tomllib.load(infile)


def load_config_file(filename: str) -> Dict[str, Any]:
    r"""
    Load a configuration dictionary choosing the parser from the file extension.
    `.toml` is the native format, `.yaml`/`.yml` and `.json` are accepted as well.
    """
    extension = os.path.splitext(filename)[1].lower()
    if extension == '.toml':
        return load_toml(filename)
    if extension in ('.yaml', '.yml'):
        return load_yaml(filename)
    if extension == '.json':
        return load_json(filename)
    raise ValueError(f"Unsupported config extension '{extension}' for file {filename}")


def dumps_toml(data: Dict) -> str:
    r"""
    Serialize a dictionary to a toml document. `None` values are dropped since toml has no null.
    """
    return tomli_w.dumps(_drop_none(data))


def _drop_none(data):
    if isinstance(data, dict):
        return {k: _drop_none(v) for k, v in data.items() if v is not None}
    if isinstance(data, (list, tuple)):
        return [_drop_none(v) for v in data]
    return data

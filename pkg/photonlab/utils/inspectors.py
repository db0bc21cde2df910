from inspect import getmembers, isabstract, isclass
from typing import Dict, Type


def get_classes_from_module(module, parent: Type = None, key: str = None) -> Dict[str, Type]:
    r"""
    Collect the public, concrete classes of `module` that subclass `parent`.

    Classes are indexed by their `key` attribute when given (classes without it are skipped),
    otherwise by their lower-cased class name.
    """
    res = {}
    for name, member in getmembers(module, isclass):
        if name.startswith('_') or isabstract(member):
            continue
        if parent is not None and (member is parent or not issubclass(member, parent)):
            continue
        if key is None:
            res[name.lower()] = member
        elif getattr(member, key, None):
            res[getattr(member, key)] = member
    return res

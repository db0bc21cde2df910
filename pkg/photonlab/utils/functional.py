import os
from typing import Any, Dict, Iterable, List, Optional, Tuple

THREADS_ENV_VARIABLE = "PHOTONLAB_THREADS"


def split_boundaries(length: int, n: int) -> List[Tuple[int, int]]:
    r"""
    Split `range(length)` in `n` contiguous parts of equal size (or similar, if `length % n != 0`)
    and return the `(start, stop)` boundaries of each non-empty part.
    """
    assert n >= 1, f"n must be positive, found {n}"
    k, m = divmod(length, n)
    boundaries = [(i * k + min(i, m), (i + 1) * k + min(i + 1, m)) for i in range(n)]
    return [(start, stop) for start, stop in boundaries if stop > start]


def concat_dict_values(data: Iterable[Dict]) -> Dict[str, List]:
    r"""
    Collect the values of every key over a sequence of dictionaries, in order. Keys missing from some
    dictionaries get shorter lists.
    """
    res: Dict[str, List] = {}
    for dictionary in data:
        for key, value in dictionary.items():
            res.setdefault(key, []).append(value)
    return res


def flatten_dict(params: Dict[str, Any], delimiter: str = "/", parent_key: str = "") -> Dict[str, Any]:
    r"""
    Flatten hierarchical dicts, for example `{'a': {'b': 1}}` becomes `{'a/b': 1}`.
    """
    result = {}
    for key, value in params.items():
        new_key = f"{parent_key}{delimiter}{key}" if parent_key else str(key)
        if isinstance(value, dict):
            result.update(flatten_dict(value, delimiter=delimiter, parent_key=new_key))
        else:
            result[new_key] = value
    return result


def resolve_threads(threads: Optional[int] = None) -> int:
    r"""
    Number of worker threads: explicit value first, then the `PHOTONLAB_THREADS` environment variable, then 1.
    """
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV_VARIABLE, "1"))
    if threads < 1:
        raise ValueError(f"Number of threads must be at least 1, found {threads}")
    return threads

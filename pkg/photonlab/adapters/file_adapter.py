import os
from argparse import Namespace

from photonlab.adapters.super_adapter import SuperAdapter


class FileAdapter(SuperAdapter):
    r"""
    Base of the tag file readers, bound to one file on disk. Subclasses decode the format in `read`.
    """

    def __init__(self, hyperparameters: Namespace, filepath: str) -> None:
        r"""
        Args:
            filepath: tag file to read, it must exist when the reader is built
        """
        super().__init__(hyperparameters)
        if not isinstance(filepath, (str, os.PathLike)):
            raise TypeError(f"Tag file path must be a string or path, found {type(filepath).__name__}")
        filepath = os.fspath(filepath)
        if not os.path.isfile(filepath):
            raise FileNotFoundError(f"No tag file at {filepath}")
        self.filepath = filepath

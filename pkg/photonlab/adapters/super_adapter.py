from abc import ABC, abstractmethod
from argparse import ArgumentParser, Namespace
from typing import Iterable

from photonlab.core.types import TagStream, TimeTag


class SuperAdapter(ABC):
    r"""
    An Adapter reads time tags from some source and hands them over as a `TagStream`, the only input the correlator
    and the analysis need. `__iter__` yields single `TimeTag`s, `read` returns the whole columnar stream.
    """

    def __init__(self, hyperparameters: Namespace) -> None:
        r"""
        :param hyperparameters: global namespace containing all the useful hyper-parameters
        """
        self.hyperparameters = hyperparameters

    @abstractmethod
    def read(self) -> TagStream:
        r""" Read and validate all the tags. """

    def __iter__(self) -> Iterable[TimeTag]:
        yield from self.read()

    @staticmethod
    def add_argparse_args(parser: ArgumentParser) -> ArgumentParser:
        r""" Add here arguments that will be available from the command line. """

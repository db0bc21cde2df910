import os
from argparse import Namespace
from typing import Optional

from photonlab.adapters.csv_adapter import CSVAdapter, write_csv
from photonlab.adapters.ptag_adapter import PtagAdapter, write_ptag
from photonlab.core.types import TagStream

TAG_FORMATS = ("ptag", "csv")


def infer_tag_format(path: str) -> str:
    extension = os.path.splitext(path)[1].lower().lstrip(".")
    if extension not in TAG_FORMATS:
        raise ValueError(f"Cannot infer the tag format of {path}, use one of {TAG_FORMATS}")
    return extension


def read_tags(path: str, tag_format: Optional[str] = None, hyperparameters: Namespace = None) -> TagStream:
    r""" Read a tag file, the format following the extension unless given. """
    tag_format = tag_format or infer_tag_format(path)
    if tag_format not in TAG_FORMATS:
        raise ValueError(f"Unknown tag format {tag_format}, use one of {TAG_FORMATS}")
    adapter_class = PtagAdapter if tag_format == "ptag" else CSVAdapter
    return adapter_class(hyperparameters or Namespace(), path).read()


def write_tags(path: str, tags: TagStream, tag_format: Optional[str] = None):
    tag_format = tag_format or infer_tag_format(path)
    if tag_format not in TAG_FORMATS:
        raise ValueError(f"Unknown tag format {tag_format}, use one of {TAG_FORMATS}")
    (write_ptag if tag_format == "ptag" else write_csv)(path, tags)

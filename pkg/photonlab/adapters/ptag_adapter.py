r"""
Binary tag files: a 16-byte header (magic ``PTAG``, little-endian u16 version, 10 reserved bytes) followed by
16-byte little-endian records (u8 channel, 3 pad bytes, u64 time in ps, u32 reserved).
"""
import logging
import os
from argparse import Namespace

import numpy as np

from photonlab.adapters.file_adapter import FileAdapter
from photonlab.core.exceptions import TagFileError
from photonlab.core.types import MAX_TIME_PS, TagStream, first_unsorted_index

logger = logging.getLogger(__name__)

MAGIC = b"PTAG"
VERSION = 1
HEADER_DTYPE = np.dtype([("magic", "S4"), ("version", "<u2"), ("reserved", "V10")])
RECORD_DTYPE = np.dtype([("channel", "u1"), ("pad", "V3"), ("time", "<u8"), ("reserved", "<u4")])
HEADER_SIZE = HEADER_DTYPE.itemsize
RECORD_SIZE = RECORD_DTYPE.itemsize


class PtagAdapter(FileAdapter):
    r"""
    Reader of binary tag files. Every malformation raises `TagFileError` with the byte offset where it was found.
    """

    def __init__(self, hyperparameters: Namespace, filepath: str) -> None:
        super().__init__(hyperparameters, filepath)

    def read(self) -> TagStream:
        size = os.path.getsize(self.filepath)
        if size < HEADER_SIZE:
            raise TagFileError(f"file is {size} bytes, shorter than the {HEADER_SIZE}-byte header", self.filepath, size)
        header = np.fromfile(self.filepath, dtype=HEADER_DTYPE, count=1)[0]
        if header["magic"] != MAGIC:
            raise TagFileError(f"bad magic {bytes(header['magic'])!r}, expected {MAGIC!r}", self.filepath, 0)
        if header["version"] != VERSION:
            raise TagFileError(f"unsupported version {int(header['version'])}", self.filepath, 4)

        n_records, remainder = divmod(size - HEADER_SIZE, RECORD_SIZE)
        if remainder:
            raise TagFileError(f"truncated record, {remainder} of {RECORD_SIZE} bytes",
                               self.filepath, HEADER_SIZE + n_records * RECORD_SIZE)

        if n_records == 0:
            return TagStream.empty()
        records = np.fromfile(self.filepath, dtype=RECORD_DTYPE, count=n_records, offset=HEADER_SIZE)
        times = records["time"]
        too_late = np.flatnonzero(times >= np.uint64(MAX_TIME_PS))
        if len(too_late):
            raise TagFileError("tag time beyond 2^63 ps", self.filepath, HEADER_SIZE + int(too_late[0]) * RECORD_SIZE)
        index = first_unsorted_index(times)
        if index is not None:
            raise TagFileError("tags are not sorted in time", self.filepath, HEADER_SIZE + index * RECORD_SIZE)

        logger.debug("Read %d tags from %s", n_records, self.filepath)
        return TagStream(records["channel"].copy(), times.copy())


def write_ptag(path: str, tags: TagStream):
    r""" Write a time-sorted tag stream; reading the file back gives the same stream. """
    index = first_unsorted_index(tags.times)
    if index is not None:
        raise TagFileError("tags are not sorted in time", path, HEADER_SIZE + index * RECORD_SIZE)
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header["magic"] = MAGIC
    header["version"] = VERSION
    records = np.zeros(len(tags), dtype=RECORD_DTYPE)
    records["channel"] = tags.channels
    records["time"] = tags.times
    with open(path, "wb") as fo:
        fo.write(header.tobytes())
        fo.write(records.tobytes())

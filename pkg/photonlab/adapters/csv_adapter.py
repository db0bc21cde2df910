import csv
import logging
from argparse import Namespace

import numpy as np

from photonlab.adapters.file_adapter import FileAdapter
from photonlab.core.exceptions import TagFileError
from photonlab.core.types import TagStream, first_unsorted_index

logger = logging.getLogger(__name__)

CSV_HEADER = ["channel", "time_ps"]


class CSVAdapter(FileAdapter):
    r"""
    An Adapter to load tags from a CSV file with a `channel,time_ps` header and one tag per line.
    Blank lines are skipped. Errors name the byte offset of the offending line.
    Use kwargs to pass parameters directly to the csv reader, like `delimiter`.
    """

    def __init__(self, hyperparameters: Namespace, filepath: str, **kwargs):
        super().__init__(hyperparameters, filepath)
        self.csv_kwargs = kwargs

    def _rows(self):
        r""" Yield the byte offset and the parsed fields of each non-blank line. """
        offset = 0
        with open(self.filepath, "rb") as fi:
            for raw in fi:
                line = raw.decode("utf-8", errors="replace").strip()
                if line:
                    yield offset, next(csv.reader([line], **self.csv_kwargs))
                offset += len(raw)

    def read(self) -> TagStream:
        rows = self._rows()
        header = next(rows, None)
        if header is None or [field.strip() for field in header[1]] != CSV_HEADER:
            raise TagFileError(f"expected header {','.join(CSV_HEADER)}", self.filepath, 0)

        channels, times, offsets = [], [], []
        for offset, fields in rows:
            try:
                channel, time = (int(field) for field in fields)
            except ValueError:
                raise TagFileError(f"cannot parse {fields} as two integers", self.filepath, offset) from None
            if not 0 <= channel < 256 or time < 0:
                raise TagFileError(f"channel {channel} or time {time} out of range", self.filepath, offset)
            channels.append(channel)
            times.append(time)
            offsets.append(offset)

        times = np.asarray(times, dtype=np.uint64)
        index = first_unsorted_index(times)
        if index is not None:
            raise TagFileError("tags are not sorted in time", self.filepath, offsets[index])
        logger.debug("Read %d tags from %s", len(times), self.filepath)
        return TagStream(np.asarray(channels, dtype=np.uint8), times)


def write_csv(path: str, tags: TagStream):
    with open(path, "w", newline="") as fo:
        writer = csv.writer(fo)
        writer.writerow(CSV_HEADER)
        writer.writerows(zip(tags.channels.tolist(), tags.times.tolist()))

from argparse import Namespace

import numpy as np
import pytest

from photonlab.adapters import CSVAdapter, PtagAdapter, infer_tag_format, read_tags, write_csv, write_ptag, write_tags
from photonlab.adapters.ptag_adapter import HEADER_SIZE, RECORD_DTYPE, RECORD_SIZE
from photonlab.core.exceptions import TagFileError
from photonlab.core.types import TagStream, TimeTag
from tests.helpers import two_channel_tags


def _tags(n: int = 1000, seed: int = 0) -> TagStream:
    rng = np.random.default_rng(seed)
    return two_channel_tags(
        np.sort(rng.integers(0, 10 ** 12, n)), np.sort(rng.integers(0, 10 ** 12, n))
    )


@pytest.mark.parametrize("tag_format", ["ptag", "csv"])
def test_round_trip(tag_format, tmp_path):
    tags = _tags()
    path = str(tmp_path / f"tags.{tag_format}")
    write_tags(path, tags)
    loaded = read_tags(path)
    assert np.array_equal(loaded.channels, tags.channels)
    assert np.array_equal(loaded.times, tags.times)

    again = str(tmp_path / f"again.{tag_format}")
    write_tags(again, loaded)
    with open(path, "rb") as first, open(again, "rb") as second:
        assert first.read() == second.read()


def test_ptag_layout(tmp_path):
    tags = TagStream(np.array([3, 1]), np.array([5, 2 ** 40]))
    path = tmp_path / "tags.ptag"
    write_ptag(str(path), tags)
    data = path.read_bytes()
    assert len(data) == HEADER_SIZE + 2 * RECORD_SIZE
    assert data[:4] == b"PTAG"
    assert data[4:6] == (1).to_bytes(2, "little")
    assert data[HEADER_SIZE] == 3
    assert data[HEADER_SIZE + 4:HEADER_SIZE + 12] == (5).to_bytes(8, "little")


def test_empty_files(tmp_path):
    for name in ("empty.ptag", "empty.csv"):
        path = str(tmp_path / name)
        write_tags(path, TagStream.empty())
        assert len(read_tags(path)) == 0


def test_ptag_truncated(tmp_path):
    path = tmp_path / "tags.ptag"
    tags = _tags(10)
    write_ptag(str(path), tags)
    path.write_bytes(path.read_bytes()[:-5])
    with pytest.raises(TagFileError) as info:
        read_tags(str(path))
    assert info.value.offset == HEADER_SIZE + (len(tags) - 1) * RECORD_SIZE
    assert info.value.path == str(path)

    path.write_bytes(b"PTAG")
    with pytest.raises(TagFileError) as info:
        read_tags(str(path))
    assert info.value.offset == 4


def test_ptag_bad_header(tmp_path):
    path = tmp_path / "tags.ptag"
    write_ptag(str(path), _tags(10))
    data = bytearray(path.read_bytes())

    data[:4] = b"XTAG"
    path.write_bytes(bytes(data))
    with pytest.raises(TagFileError) as info:
        read_tags(str(path))
    assert info.value.offset == 0

    data[:4] = b"PTAG"
    data[4] = 2
    path.write_bytes(bytes(data))
    with pytest.raises(TagFileError) as info:
        read_tags(str(path))
    assert info.value.offset == 4


def test_ptag_unsorted(tmp_path):
    path = tmp_path / "tags.ptag"
    write_ptag(str(path), TagStream.from_times([1, 2, 3]))
    data = bytearray(path.read_bytes())
    records = np.frombuffer(bytes(data[HEADER_SIZE:]), dtype=RECORD_DTYPE).copy()
    records["time"] = [1, 9, 3]
    path.write_bytes(bytes(data[:HEADER_SIZE]) + records.tobytes())

    with pytest.raises(TagFileError) as info:
        read_tags(str(path))
    assert info.value.offset == HEADER_SIZE + 2 * RECORD_SIZE

    with pytest.raises(TagFileError):
        write_ptag(str(tmp_path / "other.ptag"), TagStream.from_times([3, 1]))


@pytest.mark.parametrize(
    ["content", "offset"], [
        ["time_ps,channel\n0,1\n", 0],
        ["channel,time_ps\n0,1\nzero,2\n", 20],
        ["channel,time_ps\n0,5\n1,4\n", 20],
        ["channel,time_ps\n0,5\n\n300,6\n", 21],
        ["channel,time_ps\n0,-5\n", 16],
    ]
)
def test_csv_errors(content, offset, tmp_path):
    path = tmp_path / "tags.csv"
    path.write_text(content)
    with pytest.raises(TagFileError) as info:
        read_tags(str(path))
    assert info.value.offset == offset


def test_csv_adapter(tmp_path):
    path = tmp_path / "tags.csv"
    path.write_text("channel;time_ps\n0;10\n\n1;20\n")
    adapter = CSVAdapter(Namespace(), str(path), delimiter=";")
    assert list(adapter) == [TimeTag(0, 10), TimeTag(1, 20)]

    write_csv(str(path), TagStream.from_times([7], channel=2))
    assert path.read_text().splitlines() == ["channel,time_ps", "2,7"]


def test_missing_files(tmp_path):
    with pytest.raises(FileNotFoundError):
        PtagAdapter(Namespace(), str(tmp_path / "missing.ptag"))
    with pytest.raises(FileNotFoundError):
        read_tags(str(tmp_path / "missing.csv"))
    with pytest.raises(FileNotFoundError):
        PtagAdapter(Namespace(), tmp_path / "missing.ptag")
    with pytest.raises(TypeError):
        PtagAdapter(Namespace(), 3)


def test_infer_tag_format():
    assert infer_tag_format("run/tags.PTAG") == "ptag"
    assert infer_tag_format("tags.csv") == "csv"
    with pytest.raises(ValueError):
        infer_tag_format("tags.bin")
    with pytest.raises(ValueError):
        write_tags("tags.csv", TagStream.empty(), tag_format="hdf5")

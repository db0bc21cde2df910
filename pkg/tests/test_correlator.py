import numpy as np
import pytest

from photonlab.core.exceptions import BinningError, DomainError, UnsortedTagsError
from photonlab.correlator import (
    CorrelationHistogram,
    coarse_correlate,
    correlate,
    half_bins,
    peak_areas,
    tcspc,
)
from photonlab.utils.functional import THREADS_ENV_VARIABLE
from tests.helpers import brute_force_histogram, comb_histogram, pulsed_poisson_times

PERIOD = 6570


def _random_instance(seed: int):
    rng = np.random.default_rng(seed)
    span = int(rng.integers(10, 5000))
    a = np.sort(rng.integers(0, span, int(rng.integers(0, 300)))).astype(np.int64)
    b = np.sort(rng.integers(0, span, int(rng.integers(0, 300)))).astype(np.int64)
    bin_ps = int(rng.choice([1, 2, 7, 16, 50, 333]))
    range_ps = int(rng.choice([0, 1, 40, 333, 1000, 6000]))
    return a, b, bin_ps, range_ps


@pytest.mark.parametrize("seed", range(100))
def test_correlate_matches_brute_force(seed):
    a, b, bin_ps, range_ps = _random_instance(seed)
    hist = correlate(a, b, bin_ps, range_ps)
    assert np.array_equal(hist.counts, brute_force_histogram(a, b, bin_ps, range_ps))
    assert hist.n_a == len(a) and hist.n_b == len(b)

    auto = correlate(a, a, bin_ps, range_ps)
    assert np.array_equal(auto.counts, brute_force_histogram(a, a, bin_ps, range_ps, auto=True))


@pytest.mark.parametrize(["bin_ps", "range_ps"], [[10, 20], [10, 25], [16, 6570], [1, 0]])
def test_edge_bins(bin_ps, range_ps):
    # delays sitting exactly on bin edges and on the range limit
    a = np.array([1000], dtype=np.int64)
    offsets = np.arange(-range_ps - bin_ps, range_ps + bin_ps + 1)
    for offset in [-range_ps, -bin_ps // 2, bin_ps // 2, range_ps, range_ps + 1]:
        assert offset in offsets
    b = np.sort(1000 + offsets).astype(np.int64)
    hist = correlate(a, b, bin_ps, range_ps)
    assert np.array_equal(hist.counts, brute_force_histogram(a, b, bin_ps, range_ps))
    assert hist.total == 2 * range_ps + 1


def test_half_bin_symmetry():
    hist = correlate(np.array([100]), np.array([95, 105]), 10, 20)
    # +-5 ps are half a bin away from zero and round away from it
    assert hist.counts.tolist() == [0, 1, 0, 1, 0]
    assert hist.delays.tolist() == [-20, -10, 0, 10, 20]


def test_mirror_identity():
    a, b, bin_ps, range_ps = _random_instance(1234)
    forward = correlate(a, b, bin_ps, range_ps)
    backward = correlate(b, a, bin_ps, range_ps)
    assert np.array_equal(forward.mirrored().counts, backward.counts)
    assert forward.mirrored().n_a == backward.n_a


@pytest.mark.parametrize("threads", [2, 3, 8])
def test_threads_do_not_change_the_result(threads, monkeypatch):
    rng = np.random.default_rng(0)
    a = np.sort(rng.integers(0, 10 ** 7, 20_000)).astype(np.int64)
    b = np.sort(rng.integers(0, 10 ** 7, 20_000)).astype(np.int64)
    single = correlate(a, b, 16, 20_000, threads=1)
    assert np.array_equal(correlate(a, b, 16, 20_000, threads=threads).counts, single.counts)

    monkeypatch.setenv(THREADS_ENV_VARIABLE, str(threads))
    assert np.array_equal(correlate(a, b, 16, 20_000).counts, single.counts)
    assert np.array_equal(correlate(a, a, 16, 20_000).counts, correlate(a, a, 16, 20_000, threads=1).counts)


def test_correlate_errors():
    with pytest.raises(UnsortedTagsError) as info:
        correlate(np.array([1, 5, 3]), np.array([1, 2]), 10, 100)
    assert info.value.index == 2
    with pytest.raises(UnsortedTagsError):
        correlate(np.array([1, 2]), np.array([9, 2]), 10, 100)
    with pytest.raises(DomainError):
        correlate(np.array([1]), np.array([1]), 0, 100)
    with pytest.raises(ValueError):
        correlate(np.array([1, 2]), np.array([1]), 10, 100, auto=True)


def test_coarse_correlate():
    rng = np.random.default_rng(1)
    a = pulsed_poisson_times(PERIOD, 50_000, 0.3, 250.0, rng)
    hist = coarse_correlate(a, a, PERIOD, 10 * PERIOD)
    assert hist.bin_ps == PERIOD
    assert hist.half_bins == 10
    # one click per pulse at most, so nothing falls in the zero-delay bin
    assert hist.counts[10] == 0
    # the outermost bins only see half of their peak
    side = hist.counts[np.r_[1:10, 11:20]].astype(np.float64)
    assert np.allclose(side / side.mean(), 1.0, atol=0.05)


def test_histogram_container(tmp_path):
    hist = correlate(np.array([0, 100]), np.array([50, 120]), 10, 100, duration_ps=200)
    assert half_bins(10, 100) == 10
    assert len(hist.counts) == 21
    assert hist.total == 3

    merged = hist.merge(hist)
    assert merged.total == 6
    assert merged.n_a == 4 and merged.duration_ps == 400
    with pytest.raises(BinningError):
        hist.merge(CorrelationHistogram.zeros(20, 100))
    with pytest.raises(BinningError):
        CorrelationHistogram(10, 100, np.zeros(5), 0, 0)

    delays, counts = hist.window(0, 50)
    assert delays.tolist() == [0, 10, 20, 30, 40, 50]
    assert counts.sum() == 2

    path = tmp_path / "hist.csv"
    hist.to_csv(str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "bin_center_ps,counts"
    assert len(lines) == 22


def test_peak_areas():
    hist = comb_histogram(PERIOD, 16, 40_000, side_area=1e6, central_area=1e5, width_ps=250.0)
    peaks = peak_areas(hist, PERIOD, 3200)
    assert peaks.max_index == 5
    assert peaks.central == pytest.approx(1e5, rel=1e-3)
    indices, areas = peaks.side(3)
    assert sorted(indices.tolist()) == [-3, -2, -1, 1, 2, 3]
    assert np.allclose(areas, 1e6, rtol=1e-3)
    assert peaks.area(-5) == pytest.approx(1e6, rel=1e-3)
    assert set(peaks.to_dict()) == set(range(-5, 6))

    with pytest.raises(DomainError):
        peaks.side(6)
    with pytest.raises(DomainError):
        peaks.area(7)


@pytest.mark.parametrize(["period", "window"], [[6570, 6580], [6570, 3208 + 1], [0, 16]])
def test_peak_areas_binning_errors(period, window):
    hist = CorrelationHistogram.zeros(16, 40_000)
    with pytest.raises(BinningError):
        peak_areas(hist, period, window)


def test_tcspc():
    tags = np.arange(1000, dtype=np.int64) * PERIOD + 100
    hist = tcspc(tags, PERIOD, PERIOD, 10, offset_ps=1000)
    assert hist.start_ps == -1000
    assert hist.total == 1000
    assert hist.n_tags == 1000
    peak = int(np.argmax(hist.counts))
    assert hist.centers[peak] == pytest.approx(105.0)
    assert len(hist.counts) == -(-PERIOD // 10)

    short = tcspc(tags, PERIOD, 500, 10)
    assert len(short.counts) == 50
    assert short.total == 1000
    assert int(np.argmax(short.counts)) == 10

    with pytest.raises(UnsortedTagsError):
        tcspc(tags[::-1], PERIOD, PERIOD, 10)
    with pytest.raises(DomainError):
        tcspc(tags, PERIOD, PERIOD, 10, offset_ps=PERIOD)

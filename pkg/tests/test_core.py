import math

import numpy as np
import pytest
from pydantic import ValidationError

from photonlab.core import (
    BlinkingConfig,
    CircuitConfig,
    DomainError,
    EmitterConfig,
    FitResult,
    Measurement,
    PhotonPacket,
    PhotonStream,
    StreamKind,
    TagStream,
    TimeTag,
    UnsortedTagsError,
    derive_seed,
    fourier_limit,
    gaussian_fwhm_to_sigma,
    linewidth_to_fourier_ratio,
    rng_stream,
    sigma_to_gaussian_fwhm,
    voigt_fwhm,
    voigt_gaussian_from_fwhm,
    wavelength_to_frequency_ghz,
)
from photonlab.core.types import Origin, first_unsorted_index


def test_fourier_limit():
    assert round(fourier_limit(201), 3) == 0.792
    assert fourier_limit(float("inf")) == 0.0
    assert fourier_limit(100) == pytest.approx(2 * fourier_limit(200))


@pytest.mark.parametrize("tau", [0.0, -1.0, float("nan")])
def test_fourier_limit_domain(tau):
    with pytest.raises(DomainError):
        fourier_limit(tau)


@pytest.mark.parametrize(
    ["f_l", "f_g"], [
        [0.792, 4.5],
        [0.792, 0.0],
        [1.0, 1.0],
        [3.0, 0.5],
    ]
)
def test_voigt_inverse(f_l, f_g):
    fwhm = voigt_fwhm(f_l, f_g)
    assert fwhm >= f_l
    assert voigt_gaussian_from_fwhm(fwhm, f_l) == pytest.approx(f_g, abs=1e-7)


def test_voigt_limits():
    assert voigt_fwhm(0.0, 2.0) == pytest.approx(2.0)
    # pure Lorentzian within the accuracy of the approximation
    assert voigt_fwhm(2.0, 0.0) == pytest.approx(2.0, rel=2e-4)
    with pytest.raises(DomainError):
        voigt_fwhm(-1.0, 1.0)
    with pytest.raises(DomainError):
        voigt_gaussian_from_fwhm(0.5, 1.0)


def test_unit_helpers():
    assert sigma_to_gaussian_fwhm(gaussian_fwhm_to_sigma(3.0)) == pytest.approx(3.0)
    assert sigma_to_gaussian_fwhm(1.0) == pytest.approx(2.3548, abs=1e-4)
    assert wavelength_to_frequency_ghz(781.71) == pytest.approx(383_508.5, rel=1e-6)
    assert linewidth_to_fourier_ratio(4.82, 201) == pytest.approx(4.82 / 0.7918, rel=1e-3)
    with pytest.raises(DomainError):
        wavelength_to_frequency_ghz(0.0)


def test_rng_stream_determinism():
    a = rng_stream(7, StreamKind.BLINKING, 3).random(5)
    b = rng_stream(7, StreamKind.BLINKING, 3).random(5)
    c = rng_stream(7, StreamKind.BLINKING, 4).random(5)
    d = rng_stream(8, StreamKind.BLINKING, 3).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    assert derive_seed(7, StreamKind.SUBRUN, 0) == derive_seed(7, StreamKind.SUBRUN, 0)
    assert derive_seed(7, StreamKind.SUBRUN, 0) != derive_seed(7, StreamKind.SUBRUN, 1)

    with pytest.raises(ValueError):
        rng_stream(-1)


def test_configs_are_frozen_and_strict():
    emitter = EmitterConfig()
    assert emitter.tau_ps == 201.0
    assert not emitter.blink.blinks
    with pytest.raises(ValidationError):
        emitter.tau_ps = 100.0
    with pytest.raises(ValidationError):
        EmitterConfig(tau=100.0)
    with pytest.raises(ValidationError):
        EmitterConfig(prep_fidelity=1.5)
    with pytest.raises(ValidationError):
        CircuitConfig(mmi_ratio=1.0)
    with pytest.raises(ValidationError):
        CircuitConfig(pol_config="diagonal")


def test_blinking_config_rejects_absorbing_level():
    assert BlinkingConfig(k_on_a=1.0, k_off_a=0.5).blinks
    with pytest.raises(ValidationError):
        BlinkingConfig(k_on_a=0.0, k_off_a=0.5)


def test_measurement():
    m = Measurement(0.142, 0.003)
    assert m.within(0.14, 0.005)
    assert not m.within(0.15, 0.005)
    assert float(m) == 0.142
    assert m.to_dict() == dict(value=0.142, error=0.003)
    assert math.isnan(Measurement(1.0, float("nan")).error)
    with pytest.raises(DomainError):
        Measurement(1.0, -0.1)


def test_fit_result():
    fit = FitResult(params=dict(tau=Measurement(201.0, 2.0)), chi2_reduced=1.1, converged=True, n_points=10)
    assert fit.ok
    assert fit.value("tau") == 201.0
    assert "tau" in fit

    extended = fit.with_params(rate=Measurement(1 / 201.0)).with_flags("few_points", "few_points")
    assert set(extended.values()) == {"tau", "rate"}
    assert extended.flags == ("few_points", )
    assert not extended.ok
    assert extended.to_dict()["params"]["tau"] == dict(value=201.0, error=2.0)


@pytest.mark.parametrize(
    ["channel", "time"], [
        [256, 0],
        [-1, 0],
        [0, -5],
        [0, 2 ** 63],
    ]
)
def test_time_tag_domain(channel, time):
    with pytest.raises(DomainError):
        TimeTag(channel, time)


def test_tag_stream():
    first = TagStream.from_times([10, 30, 50], channel=0)
    second = TagStream.from_times([20, 30, 40], channel=1)
    merged = TagStream.merge(first, second)

    assert len(merged) == 6
    assert merged.times.tolist() == [10, 20, 30, 30, 40, 50]
    # ties keep the order of the arguments
    assert merged.channels.tolist() == [0, 1, 0, 1, 1, 0]
    assert merged.channel_ids == (0, 1)
    assert merged.channel(1).dtype == np.int64
    assert merged.channel(1).tolist() == [20, 30, 40]
    assert merged.duration_ps == 51
    assert TagStream.from_tags(list(merged)).times.tolist() == merged.times.tolist()
    assert merged.validate() is merged


def test_tag_stream_validate():
    tags = TagStream(np.array([0, 1, 0]), np.array([5, 3, 8]))
    # only each channel needs to be in order
    tags.validate()

    with pytest.raises(UnsortedTagsError) as info:
        TagStream(np.array([0, 0, 0]), np.array([10, 20, 15])).validate()
    assert info.value.index == 2

    with pytest.raises(ValueError):
        TagStream(np.array([0, 0]), np.array([1, 2, 3]))


def test_first_unsorted_index():
    assert first_unsorted_index(np.array([])) is None
    assert first_unsorted_index(np.array([1, 1, 2])) is None
    assert first_unsorted_index(np.array([1, 3, 2, 0])) == 2


def test_photon_stream():
    packets = [
        PhotonPacket(t0=100, tau=201.0, detuning=0.5),
        PhotonPacket(t0=50, tau=25.0, origin=Origin.STRAY_PULSED, pulse=3),
    ]
    stream = PhotonStream.from_packets(packets)
    assert len(stream) == 2
    assert not stream.is_sorted
    assert stream.packet(1) == packets[1]

    ordered = stream.sorted()
    assert ordered.is_sorted
    assert ordered.t0.tolist() == [50, 100]
    assert ordered.count(Origin.STRAY_PULSED) == 1
    assert ordered.count() == 2

    assert len(PhotonStream.coerce(packets[0])) == 1
    assert PhotonStream.coerce(stream) is stream
    assert len(PhotonStream.concatenate([stream, stream])) == 4
    assert len(PhotonStream.concatenate([])) == 0
    assert stream.replace(t0=np.array([1, 2])).t0.tolist() == [1, 2]
    assert list(stream.select(np.array([False, True]))) == [packets[1]]

    with pytest.raises(DomainError):
        PhotonPacket(t0=0, tau=0.0)
    with pytest.raises(DomainError):
        PhotonPacket(t0=0, tau=1.0, detuning=float("inf"))

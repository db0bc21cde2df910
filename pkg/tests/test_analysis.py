import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from photonlab.analysis import (
    BunchingFit,
    RabiSweep,
    SpectralScan,
    VtpiInputs,
    comb_g2,
    consecutive_visibility,
    correct_vtpi,
    emg,
    emg_cdf,
    ensemble_stats,
    exponential_decay,
    extract_g2_raw,
    extract_vtpi_raw,
    fit_bunching,
    fit_decay,
    fit_g2_background,
    fit_peak_comb,
    fit_rabi,
    fit_voigt_fixed_lorentzian,
    least_squares_fit,
    poisson_sigma,
    propagate,
    pulsed_stray_ratio,
    remote_visibility,
    two_sided_emg,
    voigt_line,
)
from photonlab.analysis.models import (
    bunching_envelope,
    bunching_envelope_jac,
    exponential_decay_jac,
    rabi_curve,
    rabi_curve_jac,
)
from photonlab.core.exceptions import DomainError
from photonlab.core.functional import GAUSSIAN_FWHM_FACTOR, fourier_limit, voigt_fwhm
from photonlab.core.types import Measurement
from photonlab.correlator import CorrelationHistogram, peak_areas, tcspc
from photonlab.emitter import blinking_rates_from_bunching, bunching_from_rates
from photonlab.emitter.rabi import damping_from_fidelity
from photonlab.experiments.presets import gaussian_sigma
from tests.helpers import comb_histogram

PERIOD = 6570


def _finite_difference(model, x, params, names, step=1e-6):
    columns = []
    for name in names:
        h = step * max(abs(params[name]), 1.0)
        up = model(x, **{**params, name: params[name] + h})
        down = model(x, **{**params, name: params[name] - h})
        columns.append((up - down) / (2 * h))
    return np.stack(columns, axis=1)


@pytest.mark.parametrize(
    ["model", "jac", "params"], [
        [exponential_decay, exponential_decay_jac, dict(amplitude=3.0, rate=0.7)],
        [rabi_curve, rabi_curve_jac, dict(amplitude=2.0, damping=0.17, pi_power=1.3)],
        [bunching_envelope, bunching_envelope_jac, dict(p_inf=5.0, a1=0.4, tau1=60.0)],
        [bunching_envelope, bunching_envelope_jac, dict(p_inf=5.0, a1=0.4, tau1=60.0, a2=0.6, tau2=130.0)],
    ]
)
def test_jacobians_match_finite_differences(model, jac, params):
    x = np.linspace(0.05, 8.0, 40) if model is not bunching_envelope else np.linspace(-500, 500, 41)
    analytic = jac(x, **params)
    numeric = _finite_difference(model, x, params, list(params))
    assert np.allclose(analytic, numeric, rtol=1e-4, atol=1e-8 * np.abs(numeric).max())


@pytest.mark.parametrize(["tau", "sigma"], [[201.0, 60.0], [201.0, 250.0], [135.0, 1.0], [50.0, 400.0]])
def test_emg_is_a_density(tau, sigma):
    area, _ = quad(lambda t: float(emg(np.array([t]), tau, sigma)[0]), -12 * sigma - 1, 40 * tau + 12 * sigma,
                   limit=400)
    assert area == pytest.approx(1.0, abs=1e-5)
    assert emg_cdf(np.array([1e6]), tau, sigma)[0] == pytest.approx(1.0)
    assert emg_cdf(np.array([-1e6]), tau, sigma)[0] == pytest.approx(0.0, abs=1e-12)
    # finite far in the tail
    assert np.all(np.isfinite(emg(np.array([-1e5, 1e5]), tau, sigma)))


def test_emg_limits():
    t = np.linspace(-95, 1005, 23)
    bare = np.where(t >= 0, np.exp(-t / 201.0) / 201.0, 0.0)
    assert np.allclose(emg(t, 201.0, 0.0), bare)
    assert np.allclose(emg(t, 201.0, 1e-3), bare, atol=1e-6)
    assert np.allclose(two_sided_emg(t, 201.0, 250.0), two_sided_emg(-t, 201.0, 250.0))
    with pytest.raises(DomainError):
        emg(t, 0.0, 10.0)


@pytest.mark.parametrize(["f_l", "f_g"], [[0.792, 4.5], [1.0, 0.0], [0.2, 2.0]])
def test_voigt_line_width(f_l, f_g):
    assert voigt_line(np.array([0.3]), 7.0, 0.3, f_l, f_g)[0] == pytest.approx(7.0)
    half = brentq(lambda f: voigt_line(np.array([f]), 1.0, 0.0, f_l, f_g)[0] - 0.5, 0.0, 10 * (f_l + f_g))
    assert 2 * half == pytest.approx(voigt_fwhm(f_l, f_g), rel=1e-3)
    with pytest.raises(DomainError):
        voigt_line(0.0, 1.0, 0.0, 0.0, 0.0)


def test_least_squares_fit():
    rng = np.random.default_rng(0)
    x = np.linspace(0, 5, 200)
    y = exponential_decay(x, 1000.0, 0.8)
    y = rng.poisson(y).astype(np.float64)

    fit = least_squares_fit(exponential_decay, x, y, p0=dict(amplitude=500.0, rate=0.3), sigma=poisson_sigma(y),
                            jac=exponential_decay_jac)
    assert fit.converged
    assert fit["rate"].within(0.8, 4 * fit["rate"].error)
    assert fit.chi2_reduced == pytest.approx(1.0, abs=0.3)
    assert fit.covariance.shape == (2, 2)

    bounded = least_squares_fit(exponential_decay, x, y, p0=dict(rate=0.3), fixed=dict(amplitude=1000.0),
                                bounds=dict(rate=(0.0, 0.5)))
    assert bounded.value("rate") == pytest.approx(0.5, abs=1e-3)
    assert "amplitude" not in bounded

    too_few = least_squares_fit(exponential_decay, x[:1], y[:1], p0=dict(amplitude=1.0, rate=1.0))
    assert not too_few.converged
    assert math.isnan(too_few.value("rate"))


def test_propagate():
    covariance = np.array([[4.0, 0.0], [0.0, 9.0]])
    assert propagate([1.0, 1.0], covariance) == pytest.approx(math.sqrt(13.0))
    assert math.isnan(propagate([1.0], None))
    assert poisson_sigma([0, 4]).tolist() == [1.0, 2.0]


def _tcspc_histogram(tau, sigma, n, seed, background_rate=0.0):
    rng = np.random.default_rng(seed)
    pulses = np.sort(rng.choice(10 * n, n, replace=False))
    times = pulses * PERIOD + 2000 + rng.exponential(tau, n) + rng.normal(0.0, sigma, n)
    n_background = rng.poisson(background_rate * 10 * n)
    background = rng.integers(0, 10 * n * PERIOD, n_background)
    times = np.sort(np.rint(np.concatenate([times, background])).astype(np.int64))
    return tcspc(times, PERIOD, PERIOD, 16, offset_ps=1000)


@pytest.mark.parametrize(["tau", "sigma"], [[201.0, 60.0], [135.0, 60.0], [207.0, 60.0], [201.0, 250.0]])
def test_fit_decay(tau, sigma):
    hist = _tcspc_histogram(tau, sigma, 200_000, seed=1, background_rate=0.05)
    fit = fit_decay(hist, sigma)
    assert fit.converged
    assert fit.value("tau") == pytest.approx(tau, rel=0.02)
    assert fit.value("t0") == pytest.approx(2000.0, abs=20.0)
    assert fit.value("amplitude") == pytest.approx(200_000, rel=0.02)


def test_fit_decay_without_jitter():
    hist = _tcspc_histogram(201.0, 0.0, 100_000, seed=2)
    fit = fit_decay(hist, 0.0)
    assert fit.converged
    assert fit.value("tau") == pytest.approx(201.0, rel=0.02)
    assert fit["t0"].error == 0.0


def test_fit_decay_errors():
    empty = tcspc(np.zeros(0, dtype=np.int64), PERIOD, PERIOD, 16)
    with pytest.raises(DomainError):
        fit_decay(empty, 60.0)
    with pytest.raises(DomainError):
        fit_decay(_tcspc_histogram(201.0, 60.0, 100, seed=0), -1.0)


def _bunching_histogram(beta, tau_1, tau_2, p_inf, range_us, seed):
    parameters = bunching_from_rates(blinking_rates_from_bunching(beta, tau_1, tau_2))
    hist = CorrelationHistogram.zeros(PERIOD, int(range_us * 1e6))
    expected = p_inf * parameters.envelope(hist.delays)
    counts = np.random.default_rng(seed).poisson(expected)
    counts[hist.half_bins] = 0
    return CorrelationHistogram(PERIOD, hist.range_ps, counts, 1, 1)


def test_fit_bunching_recovers_two_timescales():
    hist = _bunching_histogram(0.508, 65.0, 125.0, p_inf=2e4, range_us=1200, seed=3)
    fit = fit_bunching(hist, PERIOD)
    assert fit.n_components == 2
    assert fit.beta.value == pytest.approx(0.508, abs=0.02)
    assert fit.tau_b1_us.value == pytest.approx(65.0, rel=0.2)
    assert fit.tau_b2_us.value == pytest.approx(125.0, rel=0.2)
    assert fit.envelope(0.0) == pytest.approx(1 / fit.beta.value)
    assert set(fit.to_dict()) >= {"beta", "tau_b1_us", "tau_b2_us", "n_components"}


def test_fit_bunching_leaves_out_the_dead_time():
    hist = CorrelationHistogram.zeros(PERIOD, 200 * 10 ** 6)
    expected = np.full(len(hist.delays), 2e4)
    # the other detector is more often live right after a click
    expected[(hist.delays != 0) & (np.abs(hist.delays) <= 22_000)] *= 1.1
    counts = np.random.default_rng(5).poisson(expected)
    counts[hist.half_bins] = 0
    hist = CorrelationHistogram(PERIOD, hist.range_ps, counts, 1, 1)

    fit = fit_bunching(hist, PERIOD, exclude_ps=22_000)
    assert fit.beta.value == pytest.approx(1.0, abs=0.01)


def test_fit_bunching_errors():
    hist = _bunching_histogram(0.508, 65.0, 125.0, p_inf=100, range_us=50, seed=4)
    with pytest.raises(DomainError):
        fit_bunching(hist, PERIOD + 1)
    with pytest.raises(DomainError):
        fit_bunching(CorrelationHistogram.zeros(PERIOD, 100 * PERIOD), PERIOD)
    # the range cannot exceed the acquisition
    too_short = CorrelationHistogram(PERIOD, hist.range_ps, hist.counts, 1, 1, duration_ps=hist.range_ps // 2)
    with pytest.raises(DomainError):
        fit_bunching(too_short, PERIOD)


def test_flat_bunching():
    flat = BunchingFit.flat()
    assert flat.beta.value == 1.0
    assert np.allclose(flat.envelope(np.array([0, PERIOD, 10 ** 9])), 1.0)


def test_extract_g2_raw():
    hist = comb_histogram(PERIOD, 16, 60 * PERIOD, side_area=1e6, central_area=1.42e5, width_ps=300.0)
    peaks = peak_areas(hist, PERIOD, 3200)
    g2 = extract_g2_raw(peaks, n_side_peaks=114)
    assert g2.value == pytest.approx(0.142, rel=1e-3)
    assert 0 < g2.error < 0.002

    with pytest.raises(DomainError):
        extract_g2_raw(peaks, n_side_peaks=3)
    with pytest.raises(DomainError):
        extract_g2_raw(peaks, n_side_peaks=200)


def test_extract_g2_raw_divides_out_bunching():
    parameters = bunching_from_rates(blinking_rates_from_bunching(0.5, 65.0, 125.0))
    plain = peak_areas(comb_histogram(PERIOD, 16, 8 * PERIOD, 1e6, 1e5, 300.0), PERIOD, 3200)
    scaled_areas = plain.areas * parameters.envelope(plain.indices * PERIOD)
    bunched = type(plain)(plain.indices, np.rint(scaled_areas).astype(np.uint64), PERIOD, 3200)

    corrected = extract_g2_raw(bunched, parameters, n_side_peaks=10)
    assert corrected.value == pytest.approx(extract_g2_raw(plain, n_side_peaks=10).value * 2.0, rel=1e-3)


def _fine_histogram(central, side, background, seed, tau=201.0, irf=250.0):
    hist = CorrelationHistogram.zeros(16, 4 * PERIOD)
    delays = hist.delays.astype(np.float64)
    expected = np.full(len(delays), background)
    for m in range(-4, 5):
        area = central if m == 0 else side
        expected += area * 16 * two_sided_emg(delays - m * PERIOD, tau, math.sqrt(2) * irf)
    counts = np.random.default_rng(seed).poisson(expected)
    return CorrelationHistogram(16, 4 * PERIOD, counts, 1, 1)


def test_fit_g2_background():
    hist = _fine_histogram(central=5e3, side=1e5, background=20.0, seed=5)
    fit = fit_g2_background(hist, 250.0, PERIOD, 201.0)
    assert fit.converged
    assert fit.value("g2_bgc") == pytest.approx(0.05, abs=0.01)
    assert fit.value("background") == pytest.approx(20.0, rel=0.05)

    # the extra g2_bgc parameter is not part of the comb covariance
    assert comb_g2(fit, PERIOD).value == pytest.approx(fit.value("g2_bgc"))
    assert comb_g2(fit, PERIOD).error == pytest.approx(fit["g2_bgc"].error)

    # raw areas include the floor, so they overestimate g2(0)
    raw = extract_g2_raw(peak_areas(hist, PERIOD, 3200), n_side_peaks=6)
    assert raw.value > fit.value("g2_bgc")


def test_fit_peak_comb_and_comb_g2():
    hist = _fine_histogram(central=2e4, side=1e5, background=0.0, seed=6)
    fit = fit_peak_comb(hist, PERIOD, 250.0, 201.0, n_peaks=2)
    assert {"area_-2", "area_0", "area_2", "background"} <= set(fit.params)
    assert fit.value("area_1") == pytest.approx(1e5, rel=0.01)
    g2 = comb_g2(fit, PERIOD)
    assert g2.value == pytest.approx(0.2, abs=0.005)
    assert g2.error > 0

    with pytest.raises(DomainError):
        fit_peak_comb(hist, PERIOD, 250.0, 201.0, n_peaks=5)
    with pytest.raises(DomainError):
        fit_peak_comb(hist, PERIOD, 250.0, 0.0)


def test_correct_vtpi_balanced_single_photons():
    inputs = VtpiInputs(g_parallel=Measurement(0.24, 0.01), g_perpendicular=Measurement(1.0, 0.01))
    correction = correct_vtpi(inputs, 0.0, r_b=0.5)
    assert correction.indistinguishability.value == pytest.approx(0.76)
    assert correction.v_raw.value == pytest.approx(0.76)
    assert correction.ok


def test_correct_vtpi_identical_inputs_give_zero():
    inputs = VtpiInputs(g_parallel=Measurement(0.8, 0.01), g_perpendicular=Measurement(0.8, 0.01))
    assert correct_vtpi(inputs, Measurement(0.1, 0.01), r_b=0.5).indistinguishability.value == pytest.approx(0.0)


def test_correct_vtpi_multiphoton_raises_the_overlap():
    inputs = VtpiInputs(g_parallel=Measurement(0.3, 0.01), g_perpendicular=Measurement(1.0, 0.01))
    without = correct_vtpi(inputs, 0.0, r_b=0.5).indistinguishability.value
    with_g2 = correct_vtpi(inputs, Measurement(0.08, 0.01), r_b=0.5, r_mmi=0.5).indistinguishability
    assert with_g2.value == pytest.approx(0.7 / 0.96)
    assert with_g2.value > without
    assert with_g2.error > 0

    # stray light never interferes, so attributing part of g2(0) to it raises the overlap further
    with_stray = correct_vtpi(inputs, Measurement(0.08, 0.01), r_b=0.5, stray_share=0.5).indistinguishability
    assert with_stray.value > with_g2.value


@pytest.mark.parametrize(
    ["r_b", "r_mmi", "stray_share"], [
        [0.5, 0.5, 0.0],
        [0.5, 0.5, 0.5],
        [0.45, 0.55, 0.5],
        [0.6, 0.5, 1.0],
    ]
)
def test_correct_vtpi_inverts_the_interferometer(r_b, r_mmi, stray_share):
    g2, overlap, pairs = 0.078, 0.859, 2.0
    x = pulsed_stray_ratio(g2, stray_share)
    t_b, t_m = 1.0 - r_b, 1.0 - r_mmi
    d0d1 = (r_mmi * r_b + t_m * t_b) * (r_mmi * t_b + t_m * r_b)
    same_pulse = (r_mmi ** 2 + t_m ** 2) * r_b * t_b / d0d1
    opposite = r_mmi * t_m * (r_b ** 2 + t_b ** 2) / d0d1
    contrast = 2.0 * r_b * t_b / (r_b ** 2 + t_b ** 2)

    # consecutive pairs of all photons and of emitter photons only, relative to the side-peak level
    level = (pairs + 2.0 * x + x ** 2) / (1.0 + x) ** 2
    emitter = pairs / (1.0 + x) ** 2
    perp = g2 * same_pulse + opposite * level
    par = g2 * same_pulse + opposite * (level - contrast * overlap * emitter)

    inputs = VtpiInputs(g_parallel=Measurement(par, 0.01), g_perpendicular=Measurement(perp, 0.01))
    correction = correct_vtpi(inputs, g2, r_b=r_b, r_mmi=r_mmi, stray_share=stray_share)
    assert correction.indistinguishability.value == pytest.approx(overlap, rel=1e-9)
    assert correction.ok


def test_pulsed_stray_ratio():
    x = pulsed_stray_ratio(0.078, 0.5)
    assert 1.0 - 1.0 / (1.0 + x) ** 2 == pytest.approx(0.039)
    assert pulsed_stray_ratio(0.2, 0.0) == 0.0
    with pytest.raises(DomainError):
        pulsed_stray_ratio(0.078, 1.5)
    with pytest.raises(DomainError):
        pulsed_stray_ratio(1.0, 1.0)


def test_correct_vtpi_flags():
    inconsistent = VtpiInputs(g_parallel=Measurement(1.5, 0.01), g_perpendicular=Measurement(1.0, 0.01))
    correction = correct_vtpi(inconsistent, 0.0, r_b=0.5)
    assert correction.flags == ("inconsistent_inputs", )
    assert correction.indistinguishability.value == 0.0

    clamped = correct_vtpi(VtpiInputs(Measurement(0.0, 0.01), Measurement(1.0, 0.01)), 0.5, r_b=0.5)
    assert clamped.flags == ("clamped", )
    assert clamped.indistinguishability.value == 1.0

    with pytest.raises(DomainError):
        correct_vtpi(inconsistent, 0.0, r_b=1.0)
    with pytest.raises(DomainError):
        correct_vtpi(inconsistent, -0.1, r_b=0.5)


def test_extract_vtpi_raw():
    co = peak_areas(comb_histogram(PERIOD, 16, 8 * PERIOD, 1e6, 0.24e6, 300.0), PERIOD, 3200)
    cross = peak_areas(comb_histogram(PERIOD, 16, 8 * PERIOD, 1e6, 1e6, 300.0), PERIOD, 3200)
    v = extract_vtpi_raw(co, cross, n_side_peaks=10)
    assert v.value == pytest.approx(0.76, rel=1e-3)
    assert extract_vtpi_raw(cross, cross, n_side_peaks=10).value == pytest.approx(0.0, abs=1e-9)


def test_remote_visibility_reproduces_diffused_overlap():
    sigma = gaussian_sigma(201.0, 4.82)
    assert sigma * GAUSSIAN_FWHM_FACTOR == pytest.approx(4.38, abs=0.02)
    value = remote_visibility(201.0, sigma)
    assert value == pytest.approx(0.30, abs=0.01)

    rng = np.random.default_rng(7)
    detuning = rng.normal(0.0, math.sqrt(2) * sigma, 4 * 10 ** 6)
    monte_carlo = np.mean(1.0 / (1.0 + (2 * math.pi * detuning * 201.0e-3) ** 2))
    assert value == pytest.approx(monte_carlo, abs=1e-3)


def test_remote_visibility_is_monotonic():
    sigmas = np.linspace(0.0, 5.0, 11)
    values = [remote_visibility(201.0, s) for s in sigmas]
    assert values[0] == 1.0
    assert np.all(np.diff(values) < 0)
    taus = [50.0, 100.0, 200.0, 400.0]
    assert np.all(np.diff([remote_visibility(t, 1.0) for t in taus]) < 0)
    with pytest.raises(DomainError):
        remote_visibility(0.0, 1.0)


def test_consecutive_visibility():
    tau, sigma = 201.0, 1.9
    assert consecutive_visibility(tau, sigma, PERIOD, math.inf) == pytest.approx(1.0)
    assert consecutive_visibility(tau, sigma, PERIOD, 1e-6) == pytest.approx(remote_visibility(tau, sigma))
    values = [consecutive_visibility(tau, sigma, PERIOD, t_c) for t_c in (0.001, 0.01, 0.1, 1.0)]
    assert np.all(np.diff(values) > 0)
    assert consecutive_visibility(tau, sigma, 0.0, 1.0) == 1.0
    with pytest.raises(DomainError):
        consecutive_visibility(tau, sigma, -1.0, 1.0)


def _rabi_sweep(fidelity, n_points, max_power, seed, amplitude=1e5):
    power = np.linspace(max_power / n_points, max_power, n_points)
    expected = rabi_curve(power, amplitude, damping_from_fidelity(fidelity), 1.0)
    counts = np.random.default_rng(seed).poisson(expected)
    return RabiSweep(power, counts, pulses=10 ** 6)


@pytest.mark.parametrize("fidelity", [1.0, 0.584, 0.8])
def test_fit_rabi(fidelity):
    fit = fit_rabi(_rabi_sweep(fidelity, 60, 12.0, seed=8))
    assert fit.converged
    assert fit.value("prep_fidelity") == pytest.approx(fidelity, abs=0.03)
    assert fit.value("pi_power") == pytest.approx(1.0, rel=0.05)
    assert not fit.flags


def test_fit_rabi_starts_from_the_first_lobe():
    power = np.linspace(0.2, 12.0, 60)
    counts = rabi_curve(power, 1e5, 0.0, 1.0)
    # the undamped second lobe at 9 P_pi, slightly higher than the first
    counts[np.argmin(np.abs(power - 9.0))] += 50.0
    fit = fit_rabi(RabiSweep(power, counts))
    assert fit.converged
    assert fit.value("pi_power") == pytest.approx(1.0, rel=0.01)
    assert fit.value("prep_fidelity") == pytest.approx(1.0, abs=0.01)


def test_fit_rabi_flags():
    assert "undersampled" in fit_rabi(_rabi_sweep(0.584, 3, 12.0, seed=9)).flags
    assert "undersampled" in fit_rabi(_rabi_sweep(0.584, 6, 12.0, seed=9)).flags

    rising = fit_rabi(_rabi_sweep(0.584, 20, 0.8, seed=9))
    assert "no_oscillation" in rising.flags
    assert not rising.converged

    with pytest.raises(ValueError):
        RabiSweep(np.arange(3), np.arange(4))


def _scan(f_l, f_g, step, span, seed, amplitude=5e3, background=20.0):
    detuning = np.arange(-span / 2, span / 2 + step / 2, step)
    expected = voigt_line(detuning, amplitude, 0.1, f_l, f_g) + background
    return SpectralScan(detuning, np.random.default_rng(seed).poisson(expected), dwell_pulses=10 ** 5)


@pytest.mark.parametrize("f_g", [4.45, 8.7, 2.0])
def test_fit_voigt_fixed_lorentzian(f_g):
    f_l = fourier_limit(201.0) + 0.2
    fit = fit_voigt_fixed_lorentzian(_scan(f_l, f_g, 0.2, 40.0, seed=10), f_l)
    assert fit.converged
    assert fit.value("f_g") == pytest.approx(f_g, rel=0.05)
    assert fit.value("fwhm") == pytest.approx(voigt_fwhm(f_l, f_g), rel=0.03)
    assert fit.value("center") == pytest.approx(0.1, abs=0.05)
    assert not fit.flags


def test_fit_voigt_flags():
    f_l = fourier_limit(201.0)
    narrow = fit_voigt_fixed_lorentzian(_scan(f_l, 4.45, 0.1, 8.0, seed=11), f_l)
    assert "narrow_scan" in narrow.flags
    sparse = fit_voigt_fixed_lorentzian(_scan(f_l, 4.45, 3.0, 40.0, seed=11), f_l)
    assert "few_points" in sparse.flags
    with pytest.raises(DomainError):
        fit_voigt_fixed_lorentzian(_scan(f_l, 4.45, 0.2, 40.0, seed=11), 0.0)


def test_ensemble_stats(tmp_path):
    rng = np.random.default_rng(12)
    values = rng.normal(781.71, 3.53, 104)
    stats = ensemble_stats(values)
    assert stats.n == 104
    assert stats.mean.value == pytest.approx(781.71, abs=3 * 3.53 / math.sqrt(104))
    assert stats.mean.error == pytest.approx(stats.std / math.sqrt(104))
    assert stats.counts.sum() == 104
    assert len(stats.edges) == len(stats.counts) + 1
    assert stats.to_dict()["n"] == 104

    path = tmp_path / "ensemble.csv"
    stats.to_csv(str(path))
    assert path.read_text().splitlines()[0] == "low,high,count"

    assert ensemble_stats([1.0, 3.0]).std == pytest.approx(math.sqrt(2.0))
    with pytest.raises(DomainError):
        ensemble_stats([1.0])
    with pytest.raises(DomainError):
        ensemble_stats([1.0, float("nan")])

from photonlab.analysis.bunching import BunchingFit, fit_bunching  # noqa: F401
from photonlab.analysis.decay import fit_decay  # noqa: F401
from photonlab.analysis.ensemble import EnsembleStats, ensemble_stats  # noqa: F401
from photonlab.analysis.fitting import least_squares_fit, poisson_sigma, propagate  # noqa: F401
from photonlab.analysis.g2 import comb_g2, extract_g2_raw, fit_g2_background, fit_peak_comb  # noqa: F401
from photonlab.analysis.models import (  # noqa: F401
    bunching_envelope,
    emg,
    emg_cdf,
    exponential_decay,
    rabi_curve,
    two_sided_emg,
    voigt_line,
)
from photonlab.analysis.rabi import RabiSweep, fit_rabi  # noqa: F401
from photonlab.analysis.spectroscopy import SpectralScan, fit_voigt_fixed_lorentzian  # noqa: F401
from photonlab.analysis.visibility import (  # noqa: F401
    VtpiCorrection,
    VtpiInputs,
    consecutive_visibility,
    correct_vtpi,
    pulsed_stray_ratio,
    extract_vtpi_raw,
    remote_visibility,
)

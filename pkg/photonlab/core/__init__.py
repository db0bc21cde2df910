from photonlab.core.configs import BlinkingConfig, CircuitConfig, DetectorConfig, EmitterConfig  # noqa: F401
from photonlab.core.exceptions import (  # noqa: F401
    BinningError,
    ConfigError,
    DomainError,
    PhotonlabError,
    TagFileError,
    UnsortedTagsError,
)
from photonlab.core.functional import (  # noqa: F401
    GAUSSIAN_FWHM_FACTOR,
    PS_PER_NS,
    PS_PER_S,
    PS_PER_US,
    fourier_limit,
    gaussian_fwhm_to_sigma,
    linewidth_to_fourier_ratio,
    sigma_to_gaussian_fwhm,
    voigt_fwhm,
    voigt_gaussian_from_fwhm,
    wavelength_to_frequency_ghz,
)
from photonlab.core.random import StreamKind, derive_seed, rng_stream  # noqa: F401
from photonlab.core.types import (  # noqa: F401
    FitResult,
    Measurement,
    Origin,
    ParamEstimate,
    PhotonPacket,
    PhotonStream,
    Polarization,
    TagStream,
    TimeTag,
)

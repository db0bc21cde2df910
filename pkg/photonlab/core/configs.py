r"""
Immutable physical configuration of the emitter, the photonic circuit and the detectors.
Rates are per microsecond for blinking, frequencies are GHz and times are ps.
"""
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class BlinkingConfig(FrozenModel):
    r"""
    Switching rates (per µs) of the three-level blinking chain ON <-> OFF_A and ON <-> OFF_B.
    All zero means the emitter never blinks.
    """

    k_on_a: float = Field(0.0, ge=0.0)
    k_off_a: float = Field(0.0, ge=0.0)
    k_on_b: float = Field(0.0, ge=0.0)
    k_off_b: float = Field(0.0, ge=0.0)

    @model_validator(mode="after")
    def _check_recurrent(self):
        for name, k_off, k_on in (("a", self.k_off_a, self.k_on_a), ("b", self.k_off_b, self.k_on_b)):
            if k_off > 0 and k_on == 0:
                raise ValueError(f"OFF_{name.upper()} is absorbing: k_off_{name}={k_off} but k_on_{name}=0")
        return self

    @property
    def blinks(self) -> bool:
        return self.k_off_a > 0 or self.k_off_b > 0


class EmitterConfig(FrozenModel):
    r""" Stochastic parameters of a resonantly driven quantum-dot exciton. """

    tau_ps: float = Field(201.0, gt=0.0)
    prep_fidelity: float = Field(1.0, ge=0.0, le=1.0)
    p_reexcite: float = Field(0.0, ge=0.0, lt=1.0)
    sigma_g_ghz: float = Field(0.0, ge=0.0)
    ou_tc_us: float = Field(10.0, gt=0.0)
    blink: BlinkingConfig = BlinkingConfig()
    wavelength_nm: float = Field(781.71, gt=0.0)


class CircuitConfig(FrozenModel):
    r""" On-chip and fiber optics between the emitter and the detectors, plus laser stray light. """

    rep_period_ps: int = Field(6570, gt=0)
    mmi_ratio: float = Field(0.5, gt=0.0, lt=1.0)
    mmi_transmission: float = Field(0.822, gt=0.0, le=1.0)
    fiber_bs_ratio: float = Field(0.5, gt=0.0, lt=1.0)
    delay_ps: int = Field(6570, ge=0)
    attenuation_db_per_mm: float = Field(8.15, ge=0.0)
    path_length_mm: float = Field(0.0, ge=0.0)
    stray_pulsed_rate: float = Field(0.0, ge=0.0)
    stray_cw_rate_hz: float = Field(0.0, ge=0.0)
    pol_config: Literal["co", "cross"] = "co"
    laser_pulse_ps: float = Field(25.0, gt=0.0)
    interference_window_tau: float = Field(10.0, gt=0.0)


class DetectorConfig(FrozenModel):
    r""" A single-photon detector: Gaussian timing jitter, dark counts, dead time and efficiency. """

    irf_sigma_ps: float = Field(250.0, ge=0.0)
    dark_rate_hz: float = Field(50.0, ge=0.0)
    dead_time_ps: int = Field(22_000, ge=0)
    efficiency: float = Field(1.0, ge=0.0, le=1.0)

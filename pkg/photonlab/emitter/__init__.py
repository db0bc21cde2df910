from photonlab.emitter.blinking import (  # noqa: F401
    BlinkLevel,
    BlinkState,
    BunchingParameters,
    blink_trajectory,
    blinking_rates_from_bunching,
    bunching_from_rates,
    generator_matrix,
    initial_blink_state,
    levels_at,
    stationary_distribution,
    stationary_on_fraction,
    step_blinking,
)
from photonlab.emitter.pulse_train import (  # noqa: F401
    DEFAULT_SEGMENT_PULSES,
    EmitterCheckpoint,
    PulseTrainGenerator,
    emit_pulse_train,
)
from photonlab.emitter.rabi import damping_from_fidelity, pulse_area, rabi_excitation_prob  # noqa: F401
from photonlab.emitter.spectral import SpectralState, initial_spectral_state, ou_series, step_spectral  # noqa: F401

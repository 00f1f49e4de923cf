"""mmWave hybrid-beamforming codebook synthesis and evaluation."""

from ._core import (  # noqa: F401
    Beamformer,
    ChannelScenario,
    Codebook,
    CodebookConfig,
    CodebookIoError,
    InfeasibleConfigError,
    PSI_BOUND_H,
    PSI_BOUND_V,
    UpaConfig,
    baseline_allones,
    baseline_kp_dft,
    candidate_total,
    design_codebook,
    direction_grid,
    evaluate_rate,
    feedback_bits,
    full_period_energy,
    gain_grid,
    generate_channel,
    ideal_level,
    ideal_vector,
    load_codebook,
    mse_full_period,
    mse_to_ideal,
    omp_design,
    paired_compare,
    partition_regions,
    pattern_report,
    pattern_summary,
    phase_shift,
    planar_steering,
    quantize_phase,
    quantize_phases,
    rate_upper_bound,
    reference_gain,
    steering_vector,
    verify,
    wrap_psi,
)

__version__ = "0.1.0"

"""Hybrid beamforming for in-band coexistence of a colocated mmWave radio and radar."""

from .arrays import ArrayGeometry, Codebook, dft_codebook, steering_vector
from .beamforming import (
    BeamformerSet,
    DofWarning,
    EffectiveChannels,
    TrainedBeams,
    beamtrain,
    effective_channels,
    lmmse_combiner,
    normalize_precoder,
    null_space_precoder,
    rzf_precoder,
    svd_combiner,
    svd_precoder,
    validate_dof,
)
from .channels import (
    ChannelMatrix,
    ClusterSpec,
    PointTargetSet,
    sample_radar_scene,
    synth_clustered_channel,
    synth_interference_channels,
    synth_point_target_channel,
)
from .errors import (
    ConfigError,
    DegenerateCombinerError,
    DegenerateStreamError,
    InvalidArgumentError,
    TrialError,
)
from .metrics import (
    InterferenceTerm,
    TrialResult,
    empirical_cdf,
    sir_radar,
    spectral_efficiency,
)
from .sim import ScenarioConfig, SweepResult, derive_trial_seed, evaluate_trial, run_sweep, run_trial

__version__ = "0.1.0"

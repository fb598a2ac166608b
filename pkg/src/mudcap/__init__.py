"""Return-link capacity of multibeam mobile satellite systems.

Compares full-reuse multi-user detection, clustered per-gateway MUD, and
conventional 4-color single-beam decoding under equal physical-layer
resources, by Monte Carlo simulation and closed-form bounds.
"""

from .capacity import (
    SnrPoint,
    SpectralEfficiency,
    clustered_capacity,
    clustered_lb,
    conventional_se,
    ergodic_lb,
    high_snr_asymptote,
    logdet_capacity,
)
from .channel import (
    ChannelRealization,
    FadingParams,
    assemble_channel,
    cluster_channel,
    sample_rician,
    sample_shadowing,
)
from .coloring import ColorPlan, cochannel_set, color_scenario1, color_scenario2
from .geometry import (
    BeamGrid,
    GainMatrix,
    UserSet,
    beam_gain_matrix,
    build_beam_grid,
    drop_users,
)
from .harness import RunConfig, SweepResult, emit_csv, run_sweep, summarize
from .linkbudget import LinkBudget, throughput, transmit_snr
from .special import bessel_j, exp_integral_ei, g1

__version__ = "0.1.0"

__all__ = [
    "BeamGrid",
    "ChannelRealization",
    "ColorPlan",
    "FadingParams",
    "GainMatrix",
    "LinkBudget",
    "RunConfig",
    "SnrPoint",
    "SpectralEfficiency",
    "SweepResult",
    "UserSet",
    "assemble_channel",
    "beam_gain_matrix",
    "bessel_j",
    "build_beam_grid",
    "cluster_channel",
    "clustered_capacity",
    "clustered_lb",
    "cochannel_set",
    "color_scenario1",
    "color_scenario2",
    "conventional_se",
    "drop_users",
    "emit_csv",
    "ergodic_lb",
    "exp_integral_ei",
    "g1",
    "high_snr_asymptote",
    "logdet_capacity",
    "run_sweep",
    "sample_rician",
    "sample_shadowing",
    "summarize",
    "throughput",
    "transmit_snr",
]

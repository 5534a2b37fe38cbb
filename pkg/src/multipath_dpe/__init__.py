"""Direct position estimation for a moving antenna-array receiver.

Instead of estimating angles or delays first and triangulating
afterwards, the estimators here score a grid of initial-position
hypotheses directly against raw array snapshots collected along a
dead-reckoned trajectory.  The package provides:

* ``geometry``: ULA steering vectors and the moving local frame,
* ``channel``: a dense specular multipath simulator with LOS blockage,
* ``spectral``: spatial smoothing, MUSIC, and Capon amplitude recovery,
* ``estimators``: pseudo-ML, max-power, and single-path grid scorers,
* ``harness``: seeded Monte Carlo campaigns with RMSE aggregation,
* ``feasibility``: observation-window and pilot-burst sizing,
* ``scenario``: strict YAML configuration and shipped presets,
* ``cli``: the ``multipath-dpe`` command.
"""

from .channel import ChannelParams, MultipathRealization, Observation
from .estimators import (
    MaxPowerEstimator,
    PositionEstimate,
    PseudoMlEstimator,
    SinglePathEstimator,
    compressed_score,
    make_projector,
)
from .feasibility import FeasibilityReport, feasibility, stationarity_time
from .geometry import ArrayConfig, global_to_local, los_bearing, steering
from .harness import RmseSeries, TrialResult, run_monte_carlo, run_trial
from .scenario import ScenarioConfig, load_preset, load_scenario, preset_names
from .spectral import (
    AoaEstimateSet,
    SmoothedCovariance,
    capon_weights,
    estimate_amplitudes,
    fb_covariance,
    forward_covariance,
    smooth_music,
)

__version__ = "0.1.0"

__all__ = [
    "AoaEstimateSet",
    "ArrayConfig",
    "ChannelParams",
    "FeasibilityReport",
    "MaxPowerEstimator",
    "MultipathRealization",
    "Observation",
    "PositionEstimate",
    "PseudoMlEstimator",
    "RmseSeries",
    "ScenarioConfig",
    "SinglePathEstimator",
    "SmoothedCovariance",
    "TrialResult",
    "capon_weights",
    "compressed_score",
    "estimate_amplitudes",
    "fb_covariance",
    "feasibility",
    "forward_covariance",
    "global_to_local",
    "load_preset",
    "load_scenario",
    "los_bearing",
    "make_projector",
    "preset_names",
    "run_monte_carlo",
    "run_trial",
    "smooth_music",
    "stationarity_time",
    "steering",
]

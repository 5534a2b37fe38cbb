"""Observation-window sizing: how many snapshots fit inside stationarity.

The estimators assume the array response is frozen across one observation.
Two clocks bound the observation window: the channel coherence time set by
Doppler spread, and a geometric stationarity time, the horizon over which
receiver motion perturbs the steering vector by less than a tolerance.
Within that window the snapshot count follows from the symbol rate of a
root-raised-cosine pilot burst whose bandwidth must clear the Doppler
spread (frequency flatness is then resolvable) while staying well inside
the coherence bandwidth (time flatness).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams
from .geometry import ArrayConfig

STATIONARITY_CAP = 3600.0  # sentinel for "motion never breaks stationarity"


@dataclass(frozen=True)
class FeasibilityReport:
    """Chosen pilot parameters for one observation window."""

    observation_time: float
    coherence_time: float
    bandwidth_low: float
    bandwidth_high: float
    bandwidth: float
    roll_off: float
    sampling_interval: float
    snapshot_count: int
    stationarity_time: float | None = None


def sampling_interval(bandwidth: float, roll_off: float) -> float:
    """Symbol period T = (1 + alpha) / (2 B) of a root-raised-cosine pulse."""
    if bandwidth <= 0.0:
        raise ValueError("bandwidth must be positive")
    if not 0.0 <= roll_off <= 1.0:
        raise ValueError("roll_off must lie in [0, 1]")
    return (1.0 + roll_off) / (2.0 * bandwidth)


def snapshot_count(bandwidth: float, roll_off: float, observation_time: float) -> int:
    """Whole symbols fitting in the window: floor(T_obs / T)."""
    if observation_time <= 0.0:
        raise ValueError("observation_time must be positive")
    return int(np.floor(observation_time / sampling_interval(bandwidth, roll_off)))


def feasibility(
    params: ChannelParams,
    roll_off: float,
    observation_time: float,
    coherence_time: float | None = None,
    margin: float = 10.0,
) -> FeasibilityReport:
    """Size the pilot burst for one observation.

    The admissible bandwidth interval is ``[margin * B_D,
    B_c (1 + roll_off) / margin]``; the high end is chosen since it
    minimizes the symbol period and maximizes the snapshot count.

    Parameters
    ----------
    params : ChannelParams
        Supplies B_c and B_D.
    roll_off : float
        Root-raised-cosine excess-bandwidth factor alpha in [0, 1].
    observation_time : float
        Window length T_obs in seconds.
    coherence_time : float, optional
        Override for T_c; defaults to 1 / B_D.
    margin : float
        Guard factor applied to both bandwidth bounds.

    Raises
    ------
    ValueError
        If T_obs exceeds T_c, or the bandwidth interval is empty.
    """
    if margin <= 0.0:
        raise ValueError("margin must be positive")
    t_c = 1.0 / params.doppler_spread if coherence_time is None else float(coherence_time)
    if observation_time > t_c:
        raise ValueError(
            f"observation window {observation_time:g} s exceeds the coherence "
            f"time {t_c:g} s; the flat-in-time assumption fails"
        )
    b_low = margin * params.doppler_spread
    b_high = params.coherence_bandwidth * (1.0 + roll_off) / margin
    if b_low > b_high:
        raise ValueError(
            f"empty bandwidth interval: margin*B_D = {b_low:g} Hz exceeds "
            f"B_c*(1+alpha)/margin = {b_high:g} Hz"
        )
    bandwidth = b_high
    t = sampling_interval(bandwidth, roll_off)
    return FeasibilityReport(
        observation_time=float(observation_time),
        coherence_time=t_c,
        bandwidth_low=b_low,
        bandwidth_high=b_high,
        bandwidth=bandwidth,
        roll_off=float(roll_off),
        sampling_interval=t,
        snapshot_count=snapshot_count(bandwidth, roll_off, observation_time),
        stationarity_time=None,
    )


def _drive_by_variation(cfg: ArrayConfig, distance: float, speed: float, lateral_offset: float):
    """Fractional steering change along a straight drive-by path.

    The receiver passes the transmitter on a straight line with closest
    approach ``lateral_offset``; returns a function of elapsed time
    giving ||a(t) - a(0)|| / sqrt(M) for the unit-modulus steering
    vector, measuring the fractional response change.
    """
    k = np.arange(cfg.element_count)
    pitch = cfg.phase_pitch

    along = np.sqrt(distance**2 - lateral_offset**2)
    sin0 = lateral_offset / distance
    a0 = np.exp(1j * k * pitch * sin0)

    def variation(elapsed: float) -> float:
        x = along - speed * elapsed
        r = np.hypot(x, lateral_offset)
        a = np.exp(1j * k * pitch * (lateral_offset / r))
        return float(np.linalg.norm(a - a0) / np.sqrt(cfg.element_count))

    return variation


def stationarity_time(
    distance: float,
    speed: float,
    kappa: float,
    cfg: ArrayConfig,
    lateral_offset: float = 0.5,
    cap: float = STATIONARITY_CAP,
) -> float:
    """Largest horizon with steering variation at most ``kappa``.

    A straight constant-speed drive-by at the given range with a fixed
    closest-approach offset serves as the reference geometry; the
    variation is the fractional change ||a(t) - a(0)|| / sqrt(M).  Found
    by bracketing on a log-spaced time grid and bisection.

    Parameters
    ----------
    distance : float
        Initial transmitter range in metres, must exceed the offset.
    speed : float
        Receiver speed in m/s; (near) zero returns the cap sentinel.
    kappa : float
        Variation tolerance, e.g. 0.01 for one percent.
    cfg : ArrayConfig
    lateral_offset : float
        Closest-approach distance of the reference path, metres.
    cap : float
        Sentinel returned when the tolerance is never exceeded.
    """
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    if kappa <= 0.0:
        raise ValueError("kappa must be positive")
    if distance <= lateral_offset:
        raise ValueError("distance must exceed the lateral offset")
    if speed < 1e-9:
        return cap

    variation = _drive_by_variation(cfg, distance, speed, lateral_offset)

    # bracket the first crossing on a log grid, then bisect
    grid = np.logspace(-6, np.log10(cap), 400)
    exceeded = next((t for t in grid if variation(t) > kappa), None)
    if exceeded is None:
        return cap
    low = 0.0
    high = float(exceeded)
    for _ in range(80):
        mid = 0.5 * (low + high)
        if variation(mid) > kappa:
            high = mid
        else:
            low = mid
    return 0.5 * (low + high)


def interval_sweep(params: ChannelParams, roll_off: float, n_points: int = 64, margin: float = 10.0):
    """Symbol period across the admissible bandwidth interval.

    Returns (bandwidths, intervals) for tabulating T(B); raises if the
    interval is empty, mirroring :func:`feasibility`.
    """
    b_low = margin * params.doppler_spread
    b_high = params.coherence_bandwidth * (1.0 + roll_off) / margin
    if b_low > b_high:
        raise ValueError("empty bandwidth interval")
    bandwidths = np.linspace(b_low, b_high, n_points)
    intervals = (1.0 + roll_off) / (2.0 * bandwidths)
    return bandwidths, intervals

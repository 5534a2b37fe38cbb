"""Pilot-burst sizing and the stationarity horizon."""

import numpy as np
import pytest

from multipath_dpe.channel import ChannelParams
from multipath_dpe.feasibility import (
    STATIONARITY_CAP,
    feasibility,
    interval_sweep,
    sampling_interval,
    snapshot_count,
    stationarity_time,
)
from multipath_dpe.geometry import ArrayConfig

KMH50 = 50.0 / 3.6


@pytest.fixture
def params():
    return ChannelParams()  # B_c = 250 kHz, B_D = 512 Hz


@pytest.fixture
def ula64():
    return ArrayConfig(64, 32, 5.9e9)


@pytest.mark.parametrize("roll_off", [0.0, 0.5, 1.0])
def test_sixteen_snapshots_at_optimal_bandwidth(params, roll_off):
    report = feasibility(params, roll_off, 325e-6)
    assert report.snapshot_count == 16
    assert report.sampling_interval == pytest.approx(20e-6, rel=1e-12)
    assert report.bandwidth == pytest.approx(25e3 * (1.0 + roll_off), rel=1e-12)


def test_bandwidth_interval_bounds(params):
    report = feasibility(params, 0.5, 325e-6)
    assert report.bandwidth_low == pytest.approx(5120.0)
    assert report.bandwidth_high == pytest.approx(37.5e3)
    assert report.coherence_time == pytest.approx(1.0 / 512.0)


def test_observation_time_at_coherence_limit_is_accepted(params):
    report = feasibility(params, 0.5, 325e-6, coherence_time=325e-6)
    assert report.snapshot_count == 16
    with pytest.raises(ValueError, match="coherence"):
        feasibility(params, 0.5, 326e-6, coherence_time=325e-6)


def test_empty_bandwidth_interval_raises():
    tight = ChannelParams(coherence_bandwidth=250e3, doppler_spread=30e3)
    with pytest.raises(ValueError, match="empty bandwidth"):
        feasibility(tight, 0.5, 1e-6)


def test_snapshot_count_nonincreasing_in_roll_off_at_fixed_bandwidth():
    counts = [snapshot_count(30e3, a, 325e-6) for a in (0.0, 0.25, 0.5, 0.75, 1.0)]
    assert counts == sorted(counts, reverse=True)
    assert counts[0] == 19 and counts[-1] == 9


def test_sampling_interval_validation():
    with pytest.raises(ValueError):
        sampling_interval(0.0, 0.5)
    with pytest.raises(ValueError):
        sampling_interval(1e3, 1.5)
    with pytest.raises(ValueError):
        snapshot_count(1e3, 0.5, 0.0)


def test_stationarity_reference_horizons(ula64):
    # frozen values of the drive-by reference geometry at 50 km/h, 1%
    t100 = stationarity_time(100.0, KMH50, 0.01, ula64)
    t20 = stationarity_time(20.0, KMH50, 0.01, ula64)
    assert t100 == pytest.approx(0.12337, abs=2e-4)
    assert t20 == pytest.approx(0.005005, abs=1e-5)
    # published-style sanity bands
    assert 0.122 * 0.85 <= t100 <= 0.122 * 1.15
    assert 0.006 * 0.75 <= t20 <= 0.006 * 1.25


def test_stationarity_monotone_in_distance_and_speed(ula64):
    distances = [40.0, 70.0, 100.0, 130.0, 160.0]
    speeds = [20.0, 35.0, 50.0, 65.0, 80.0]
    for v_kmh in speeds:
        horizons = [stationarity_time(d, v_kmh / 3.6, 0.01, ula64) for d in distances]
        assert np.all(np.diff(horizons) > 0)
    for d in distances:
        horizons = [stationarity_time(d, v / 3.6, 0.01, ula64) for v in speeds]
        assert np.all(np.diff(horizons) < 0)


def test_stationarity_zero_speed_returns_cap(ula64):
    assert stationarity_time(100.0, 0.0, 0.01, ula64) == STATIONARITY_CAP


def test_stationarity_huge_tolerance_returns_cap(ula64):
    assert stationarity_time(100.0, KMH50, 10.0, ula64) == STATIONARITY_CAP


def test_stationarity_validation(ula64):
    with pytest.raises(ValueError):
        stationarity_time(0.0, KMH50, 0.01, ula64)
    with pytest.raises(ValueError):
        stationarity_time(100.0, KMH50, 0.0, ula64)
    with pytest.raises(ValueError):
        stationarity_time(0.4, KMH50, 0.01, ula64, lateral_offset=0.5)


def test_interval_sweep_spans_bounds(params):
    bandwidths, intervals = interval_sweep(params, 0.5, n_points=16)
    assert bandwidths[0] == pytest.approx(5120.0)
    assert bandwidths[-1] == pytest.approx(37.5e3)
    np.testing.assert_allclose(intervals, 1.5 / (2.0 * bandwidths))

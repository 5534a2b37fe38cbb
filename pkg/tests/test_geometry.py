"""Frame conversions, steering structure, and dead reckoning."""

import numpy as np
import pytest

from multipath_dpe.geometry import (
    ArrayConfig,
    global_to_local,
    heading_of,
    headings_from_velocities,
    los_bearing,
    reconstruct_trajectory,
    steering,
    wrap_bearing,
)


def test_los_bearing_cardinal_directions():
    assert los_bearing((0.0, 0.0), (1.0, 0.0)) == 0.0
    assert los_bearing((0.0, 0.0), (0.0, 2.0)) == pytest.approx(np.pi / 2)
    assert los_bearing((0.0, 0.0), (-1.0, -1.0)) == pytest.approx(5 * np.pi / 4)


def test_los_bearing_vectorized_matches_scalar(rng):
    origins = rng.uniform(-50, 50, (20, 2))
    targets = rng.uniform(-50, 50, (20, 2))
    batch = los_bearing(origins, targets)
    singles = [los_bearing(o, t) for o, t in zip(origins, targets)]
    np.testing.assert_allclose(batch, singles, rtol=0, atol=0)


def test_los_bearing_coincident_raises():
    with pytest.raises(ValueError, match="coincident"):
        los_bearing((3.0, 4.0), (3.0, 4.0))


def test_wrap_bearing_range(rng):
    angles = rng.uniform(-30, 30, 1000)
    wrapped = wrap_bearing(angles)
    assert np.all((wrapped >= 0.0) & (wrapped < 2 * np.pi))
    np.testing.assert_allclose(np.sin(wrapped), np.sin(angles), atol=1e-12)


def test_global_to_local_trivial_cases():
    assert global_to_local(0.3, 0.3) == 0.0
    assert global_to_local(np.pi / 4, 0.0) == pytest.approx(np.pi / 4)


def test_global_to_local_rear_arrival_mirrors():
    # 3*pi/4 behind the array maps onto pi/4: identical steering phase
    folded = global_to_local(3 * np.pi / 4, 0.0)
    assert folded == pytest.approx(np.pi / 4)
    cfg = ArrayConfig(8, 4, 5.9e9)
    k = np.arange(8)
    direct = np.exp(1j * k * cfg.phase_pitch * np.sin(3 * np.pi / 4))
    np.testing.assert_allclose(steering(folded, 8, cfg), direct, atol=1e-12)


def test_global_to_local_range_and_sine(rng):
    bearings = rng.uniform(0, 2 * np.pi, 10_000)
    headings = rng.uniform(0, 2 * np.pi, 10_000)
    local = global_to_local(bearings, headings)
    assert np.all(np.abs(local) <= np.pi / 2)
    np.testing.assert_allclose(np.sin(local), np.sin(bearings - headings), atol=1e-12)
    # folding an already-local angle changes nothing
    np.testing.assert_allclose(global_to_local(local, 0.0), local, atol=1e-12)


def test_steering_broadside_is_all_ones(ula8):
    np.testing.assert_array_equal(steering(0.0, 8, ula8), np.ones(8))


def test_steering_endfire_alternates():
    cfg = ArrayConfig(2, 2, 5.9e9)
    np.testing.assert_allclose(steering(np.pi / 2, 2, cfg), [1.0, -1.0], atol=1e-12)


def test_steering_unit_modulus(ula16, rng):
    aoas = rng.uniform(-np.pi / 2, np.pi / 2, 1000)
    a = steering(aoas, 16, ula16)
    assert a.shape == (16, 1000)
    np.testing.assert_allclose(np.abs(a), 1.0, atol=1e-12)


def test_steering_reflection_identity(ula16, rng):
    # J conj(a(theta)) = exp(-1j (M-1) w d sin(theta)) a(theta)
    m = ula16.element_count
    for theta in rng.uniform(-np.pi / 2, np.pi / 2, 1000):
        a = steering(theta, m, ula16)
        lhs = np.flip(a.conj())
        rhs = np.exp(-1j * (m - 1) * ula16.phase_pitch * np.sin(theta)) * a
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_steering_matrix_matches_scalar(ula8, rng):
    aoas = rng.uniform(-np.pi / 2, np.pi / 2, 7)
    mat = steering(aoas, 5, ula8)
    for i, aoa in enumerate(aoas):
        np.testing.assert_array_equal(mat[:, i], steering(aoa, 5, ula8))


def test_steering_length_validation(ula8):
    with pytest.raises(ValueError):
        steering(0.1, 0, ula8)
    with pytest.raises(ValueError):
        steering(0.1, 9, ula8)


def test_array_config_validation():
    with pytest.raises(ValueError):
        ArrayConfig(0, 1, 5.9e9)
    with pytest.raises(ValueError):
        ArrayConfig(8, 9, 5.9e9)
    with pytest.raises(ValueError):
        ArrayConfig(8, 4, -1.0)
    cfg = ArrayConfig(8, 4, 5.9e9)
    assert cfg.subarray_count == 5
    assert cfg.element_spacing == pytest.approx(cfg.wavelength / 2)
    assert cfg.phase_pitch == pytest.approx(np.pi)


def test_reconstruct_trajectory_single_step():
    path = reconstruct_trajectory((0.0, 0.0), [(1.0, 0.0)], [1.0])
    np.testing.assert_allclose(path, [[0.0, 0.0], [1.0, 0.0]])


def test_reconstruct_trajectory_zero_velocity_stays_put():
    path = reconstruct_trajectory((13.0, 7.0), np.zeros((5, 2)), np.full(5, 0.1))
    np.testing.assert_array_equal(path, np.tile([13.0, 7.0], (6, 1)))


def test_reconstruct_trajectory_additivity(rng):
    # integrating in one go equals integrating a prefix then restarting
    velocities = rng.normal(0, 5, (12, 2))
    dts = rng.uniform(0.01, 0.5, 12)
    full = reconstruct_trajectory((1.0, -2.0), velocities, dts)
    head = reconstruct_trajectory((1.0, -2.0), velocities[:5], dts[:5])
    tail = reconstruct_trajectory(head[-1], velocities[5:], dts[5:])
    np.testing.assert_allclose(np.vstack([head, tail[1:]]), full, atol=1e-12)


def test_reconstruct_trajectory_rejects_bad_steps():
    with pytest.raises(ValueError):
        reconstruct_trajectory((0.0, 0.0), [(1.0, 0.0)], [0.0])
    with pytest.raises(ValueError):
        reconstruct_trajectory((0.0, 0.0), [(1.0, 0.0)], [1.0, 2.0])


def test_heading_of_zero_velocity_uses_fallback():
    assert heading_of((0.0, 0.0), 1.23) == 1.23
    assert heading_of((0.0, 2.0), 0.0) == pytest.approx(np.pi / 2)


def test_headings_hold_last_valid():
    velocities = [(1.0, 0.0), (0.0, 0.0), (0.0, -1.0), (0.0, 0.0)]
    headings = headings_from_velocities(velocities, initial_heading=0.5)
    np.testing.assert_allclose(headings, [0.0, 0.0, 3 * np.pi / 2, 3 * np.pi / 2])

"""Strict configuration loading, presets, and the event schedule."""

import numpy as np
import pytest
import yaml

from multipath_dpe.channel import thermal_noise_power
from multipath_dpe.scenario import (
    ConfigError,
    GridSpec,
    ScenarioConfig,
    apply_overrides,
    load_preset,
    load_scenario,
    preset_names,
    resolve_scenario,
    scenario_from_dict,
)

MINIMAL = {
    "name": "unit",
    "bs_positions": [[73.0, 7.0]],
    "array": {"element_count": 23, "subarray_length": 17, "carrier_frequency": 5.9e9},
}


def test_shipped_presets_are_loadable():
    names = preset_names()
    assert {"ci_single_bs", "ci_two_bs", "ci_blockage", "full_scale"} <= set(names)
    for name in names:
        scenario = load_preset(name)
        assert scenario.name == name


def test_preset_values_match_documentation():
    s = load_preset("ci_single_bs")
    assert s.trials == 50
    assert s.array.element_count == 23
    assert s.array.subarray_length == 17
    assert s.grid.spacing == 1.0
    assert s.multipath.d_max == 15
    assert s.bs_positions == ((73.0, 7.0),)
    assert s.initial_position == (13.0, 7.0)
    # noise floor defaults to k T B at the roll-off implied bandwidth
    assert s.channel.noise_floor == pytest.approx(thermal_noise_power(37.5e3), rel=1e-9)
    two = load_preset("ci_two_bs")
    assert np.hypot(*(np.array(two.bs_positions[1]) - np.array(two.initial_position))) == pytest.approx(20.0, abs=0.05)


def test_unknown_toplevel_key_is_rejected():
    bad = dict(MINIMAL, extra_knob=1)
    with pytest.raises(ConfigError, match="extra_knob"):
        scenario_from_dict(bad)


def test_unknown_section_key_is_rejected():
    bad = dict(MINIMAL, grid={"center": [0, 0], "spacingg": 1.0})
    with pytest.raises(ConfigError, match="spacingg"):
        scenario_from_dict(bad)


def test_missing_required_key_is_rejected():
    with pytest.raises(ConfigError, match="name"):
        scenario_from_dict({"bs_positions": [[1.0, 1.0]]})


def test_contradictory_values_are_rejected():
    with pytest.raises(ConfigError):
        scenario_from_dict(dict(MINIMAL, trials=0))
    with pytest.raises(ConfigError):
        scenario_from_dict(dict(MINIMAL, estimators=["psuedo_ml"]))
    with pytest.raises(ConfigError):
        scenario_from_dict(dict(MINIMAL, multipath={"d_max": 16}))  # needs D+1 < P
    with pytest.raises(ConfigError):
        scenario_from_dict(dict(MINIMAL, bs_positions=[]))


def test_overrides_apply_and_validate():
    data = dict(MINIMAL)
    out = apply_overrides(data, ["trials=7", "grid.spacing=0.5", "estimators=[pseudo_ml]"])
    scenario = scenario_from_dict(out)
    assert scenario.trials == 7
    assert scenario.grid.spacing == 0.5
    assert scenario.estimators == ("pseudo_ml",)
    with pytest.raises(ConfigError, match="key=value"):
        apply_overrides(data, ["oops"])
    # unknown paths survive the override step but die at the schema check
    with pytest.raises(ConfigError, match="nonexistent"):
        scenario_from_dict(apply_overrides(data, ["nonexistent.inner=1"]))
    with pytest.raises(ConfigError, match="non-section"):
        apply_overrides(data, ["name.inner=1"])


def test_load_scenario_round_trip(tmp_path):
    path = tmp_path / "scn.yaml"
    path.write_text(yaml.safe_dump(MINIMAL))
    scenario = load_scenario(path)
    assert scenario.name == "unit"
    override = load_scenario(path, overrides=["duration=2.0"])
    assert override.duration == 2.0


def test_resolve_scenario_prefers_files(tmp_path):
    path = tmp_path / "ci_single_bs"  # shadowing a preset name on disk
    path.write_text(yaml.safe_dump(dict(MINIMAL, name="from_file")))
    assert resolve_scenario(str(path)).name == "from_file"
    assert resolve_scenario("ci_single_bs").name == "ci_single_bs"
    with pytest.raises(FileNotFoundError, match="neither"):
        resolve_scenario("no_such_scenario")


def test_grid_points_order_and_membership():
    grid = GridSpec(center=(10.0, 10.0), half_extent=20.0, spacing=1.0)
    points = grid.points()
    assert points.shape == (41 * 41, 2)
    np.testing.assert_array_equal(points[0], [-10.0, -10.0])
    np.testing.assert_array_equal(points[1], [-10.0, -9.0])  # y varies fastest
    assert np.any(np.all(points == [13.0, 7.0], axis=1))  # preset truth on-grid


def test_grid_axis_handles_non_multiple_extent():
    grid = GridSpec(center=(0.0, 0.0), half_extent=1.2, spacing=0.5)
    np.testing.assert_allclose(grid.axis(0.0), [-1.0, -0.5, 0.0, 0.5, 1.0])


def test_event_schedule_single_and_dual_bs():
    single = scenario_from_dict(dict(MINIMAL, duration=8.0, bs_rate=10.0))
    assert single.event_count == 80
    assert single.event_interval == pytest.approx(0.1)
    dual = scenario_from_dict(
        dict(MINIMAL, duration=8.0, bs_rate=10.0, bs_positions=[[73.0, 7.0], [28.0, 20.0]])
    )
    assert dual.event_count == 160
    assert dual.event_interval == pytest.approx(0.05)


def test_config_hash_tracks_content():
    a = scenario_from_dict(dict(MINIMAL))
    b = scenario_from_dict(dict(MINIMAL))
    c = scenario_from_dict(dict(MINIMAL, trials=9))
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != c.config_hash()
    assert len(a.config_hash()) == 12


def test_default_estimator_roster_is_complete():
    scenario = scenario_from_dict(dict(MINIMAL))
    assert scenario.estimators == ("pseudo_ml", "max_power", "single_path")

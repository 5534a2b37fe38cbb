"""Scenario configuration: typed schema, strict YAML loading, presets.

A scenario bundles everything one Monte Carlo campaign needs: BS layout,
receiver start and motion profile, array and channel constants, grid
prior, estimator roster, and seeds.  Config files are YAML whose keys
mirror the dataclass field names exactly; unknown or missing keys are
hard errors so a typo can never silently fall back to a default.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
import yaml

from .channel import ChannelParams, thermal_noise_power
from .estimators import ESTIMATOR_CLASSES
from .geometry import ArrayConfig


class ConfigError(ValueError):
    """Raised for malformed, contradictory, or unknown configuration."""


@dataclass(frozen=True)
class MobilitySpec:
    """Speed ramp and turn of the receiver trajectory.

    Speed ramps linearly from ``speed_start_kmh`` to ``speed_peak_kmh``
    over the first third of the run, holds, then ramps back down over
    the last third.  A constant transversal acceleration bends the path
    (positive = right turn).  Velocity sensor noise is zero-mean
    Gaussian per component with standard deviation equal to
    ``velocity_noise_fraction`` times the true component magnitude.
    """

    speed_start_kmh: float = 25.0
    speed_peak_kmh: float = 50.0
    transversal_acceleration: float = 0.025
    velocity_noise_fraction: float = 0.1

    def __post_init__(self) -> None:
        if self.speed_start_kmh < 0.0 or self.speed_peak_kmh < 0.0:
            raise ConfigError("speeds must be nonnegative")
        if self.velocity_noise_fraction < 0.0:
            raise ConfigError("velocity_noise_fraction must be nonnegative")


@dataclass(frozen=True)
class MultipathSpec:
    """Per-observation path-count law and LOS blockage probability."""

    d_min: int = 10
    d_max: int = 15
    p_nlos: float = 0.1

    def __post_init__(self) -> None:
        if self.d_min < 0 or self.d_max < self.d_min:
            raise ConfigError("need 0 <= d_min <= d_max")
        if not 0.0 <= self.p_nlos <= 1.0:
            raise ConfigError("p_nlos must lie in [0, 1]")


@dataclass(frozen=True)
class GridSpec:
    """Square search grid of initial-position hypotheses.

    The grid spans ``center +- half_extent`` per axis at uniform
    ``spacing``; points are enumerated x-major (x outer loop, y inner),
    which fixes the deterministic tie-break order.
    """

    center: tuple[float, float] = (10.0, 10.0)
    half_extent: float = 20.0
    spacing: float = 1.0

    def __post_init__(self) -> None:
        if self.spacing <= 0.0:
            raise ConfigError("grid spacing must be positive")
        if self.half_extent < 0.0:
            raise ConfigError("grid half_extent must be nonnegative")

    def axis(self, center: float) -> np.ndarray:
        n_half = int(np.floor(self.half_extent / self.spacing + 1e-9))
        return center + self.spacing * np.arange(-n_half, n_half + 1)

    def points(self) -> np.ndarray:
        """All hypotheses as an (n, 2) array in x-major order."""
        xs = self.axis(self.center[0])
        ys = self.axis(self.center[1])
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one simulation campaign."""

    name: str
    bs_positions: tuple[tuple[float, float], ...]
    initial_position: tuple[float, float] = (13.0, 7.0)
    initial_heading: float = 0.0
    duration: float = 8.0
    bs_rate: float = 10.0
    trials: int = 200
    master_seed: int = 12345
    snapshots: int = 16
    roll_off: float = 0.5
    association_tolerance_deg: float = 2.0
    music_grid_points: int = 2048
    estimators: tuple[str, ...] = ("pseudo_ml", "max_power", "single_path")
    array: ArrayConfig = field(
        default_factory=lambda: ArrayConfig(
            element_count=64, subarray_length=32, carrier_frequency=5.9e9
        )
    )
    channel: ChannelParams = field(default_factory=ChannelParams)
    mobility: MobilitySpec = field(default_factory=MobilitySpec)
    multipath: MultipathSpec = field(default_factory=MultipathSpec)
    grid: GridSpec = field(default_factory=GridSpec)

    def __post_init__(self) -> None:
        if not self.bs_positions:
            raise ConfigError("need at least one BS position")
        if self.duration <= 0.0:
            raise ConfigError("duration must be positive")
        if self.bs_rate <= 0.0:
            raise ConfigError("bs_rate must be positive")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.snapshots < 1:
            raise ConfigError("snapshots must be >= 1")
        if not 0.0 <= self.roll_off <= 1.0:
            raise ConfigError("roll_off must lie in [0, 1]")
        if self.association_tolerance_deg <= 0.0:
            raise ConfigError("association_tolerance_deg must be positive")
        if self.music_grid_points < 2:
            raise ConfigError("music_grid_points must be >= 2")
        unknown = set(self.estimators) - set(ESTIMATOR_CLASSES)
        if unknown:
            raise ConfigError(
                f"unknown estimator(s) {sorted(unknown)}; "
                f"known: {sorted(ESTIMATOR_CLASSES)}"
            )
        if self.multipath.d_max + 1 >= self.array.subarray_length:
            raise ConfigError(
                "need d_max + 1 < subarray_length so the smoothed covariance "
                "keeps a nonempty noise subspace"
            )

    @property
    def bs_count(self) -> int:
        return len(self.bs_positions)

    @property
    def event_interval(self) -> float:
        """Spacing of the interleaved observation schedule."""
        return 1.0 / (self.bs_count * self.bs_rate)

    @property
    def event_count(self) -> int:
        return int(np.floor(self.duration * self.bs_count * self.bs_rate + 1e-9))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        """Stable short digest for output-file headers."""
        blob = json.dumps(self.to_dict(), sort_keys=True, default=float)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


_SECTION_TYPES = {
    "array": ArrayConfig,
    "channel": ChannelParams,
    "mobility": MobilitySpec,
    "multipath": MultipathSpec,
    "grid": GridSpec,
}

_TUPLE_FIELDS = {"bs_positions", "initial_position", "estimators", "center"}


def _coerce(name: str, value):
    if name in _TUPLE_FIELDS:
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"key '{name}' must be a list")
        return tuple(tuple(v) if isinstance(v, (list, tuple)) else v for v in value)
    return value


def _build_section(cls, data: dict, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"section '{path}' must be a mapping")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in section '{path}'")
    kwargs = {name: _coerce(name, value) for name, value in data.items()}
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid section '{path}': {exc}") from exc


def scenario_from_dict(data: dict) -> ScenarioConfig:
    """Build a scenario from a raw mapping with strict key checking.

    If ``channel.noise_floor`` is absent, it defaults to thermal noise
    k_B * T0 * B at the pilot bandwidth B_c * (1 + roll_off) / 10
    implied by the scenario roll-off.
    """
    if not isinstance(data, dict):
        raise ConfigError("scenario config must be a mapping")
    known = {f.name for f in dataclasses.fields(ScenarioConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown top-level key(s) {unknown}")

    kwargs = {}
    for name, value in data.items():
        if name in _SECTION_TYPES:
            continue
        kwargs[name] = _coerce(name, value)

    roll_off = kwargs.get("roll_off", ScenarioConfig.__dataclass_fields__["roll_off"].default)
    for name, cls in _SECTION_TYPES.items():
        if name in data:
            section = dict(data[name]) if isinstance(data[name], dict) else data[name]
            if name == "channel" and isinstance(section, dict) and "noise_floor" not in section:
                coherence_bw = section.get(
                    "coherence_bandwidth",
                    ChannelParams.__dataclass_fields__["coherence_bandwidth"].default,
                )
                section["noise_floor"] = thermal_noise_power(
                    coherence_bw * (1.0 + roll_off) / 10.0
                )
            kwargs[name] = _build_section(cls, section, name)

    missing = sorted(
        f.name
        for f in dataclasses.fields(ScenarioConfig)
        if f.name not in kwargs
        and f.default is dataclasses.MISSING
        and f.default_factory is dataclasses.MISSING
    )
    if missing:
        raise ConfigError(f"missing required key(s) {missing}")
    try:
        return ScenarioConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def apply_overrides(data: dict, overrides) -> dict:
    """Apply ``section.key=value`` strings to a raw config mapping.

    Values are parsed as YAML scalars, so numbers, booleans, and lists
    all work.  Missing intermediate sections are created; the strict
    schema check still rejects any path it does not know.
    """
    out = json.loads(json.dumps(data))  # deep copy of plain containers
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override '{item}' must look like key=value")
        dotted, raw = item.split("=", 1)
        keys = dotted.strip().split(".")
        node = out
        for key in keys[:-1]:
            nested = node.setdefault(key, {})
            if not isinstance(nested, dict):
                raise ConfigError(f"override path '{dotted}' crosses non-section '{key}'")
            node = nested
        node[keys[-1]] = yaml.safe_load(raw)
    return out


def load_scenario(path, overrides=()) -> ScenarioConfig:
    """Load a scenario YAML file, optionally applying overrides."""
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if overrides:
        data = apply_overrides(data, overrides)
    return scenario_from_dict(data)


def preset_names() -> list[str]:
    """Names of the scenario presets shipped with the package."""
    root = resources.files("multipath_dpe") / "presets"
    return sorted(p.name[: -len(".yaml")] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_preset(name: str, overrides=()) -> ScenarioConfig:
    """Load a shipped preset by name."""
    path = resources.files("multipath_dpe") / "presets" / f"{name}.yaml"
    if not path.is_file():
        raise FileNotFoundError(
            f"no preset named '{name}'; available: {', '.join(preset_names())}"
        )
    data = yaml.safe_load(path.read_text(encoding="utf-8"))
    if overrides:
        data = apply_overrides(data, overrides)
    return scenario_from_dict(data)


def resolve_scenario(ref: str, overrides=()) -> ScenarioConfig:
    """Treat ``ref`` as a file path if it exists, else as a preset name."""
    import os

    if os.path.exists(ref):
        return load_scenario(ref, overrides)
    try:
        return load_preset(ref, overrides)
    except FileNotFoundError:
        raise FileNotFoundError(
            f"scenario '{ref}' is neither a file nor a preset "
            f"(presets: {', '.join(preset_names())})"
        ) from None

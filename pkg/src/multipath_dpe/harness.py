"""Monte Carlo harness: trajectory synthesis, trial execution, RMSE curves.

One trial walks the receiver along the configured speed/turn profile,
draws a fresh channel realization per scheduled observation, feeds every
enabled estimator in arrival order, and records per-step position errors.
Trials are independent and individually seeded, so campaigns can be
split, resumed, or pooled without changing any draw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import generate_observation, sample_multipath
from .estimators import ESTIMATOR_CLASSES, PseudoMlEstimator, SinglePathEstimator
from .geometry import los_bearing, reconstruct_trajectory
from .scenario import ScenarioConfig

KMH = 1.0 / 3.6  # km/h in m/s


def speed_profile(t, duration: float, start_kmh: float, peak_kmh: float):
    """Speed in m/s: linear ramp up, hold, linear ramp down over thirds."""
    t = np.asarray(t, dtype=float)
    third = duration / 3.0
    lo = start_kmh * KMH
    hi = peak_kmh * KMH
    up = lo + (hi - lo) * np.clip(t / third, 0.0, 1.0)
    down = hi - (hi - lo) * np.clip((t - 2.0 * third) / third, 0.0, 1.0)
    s = np.where(t < 2.0 * third, up, down)
    return float(s) if s.ndim == 0 else s


@dataclass(frozen=True)
class MobilityProfile:
    """Sampled trajectory at the observation schedule.

    Index i of the per-sample arrays refers to time t_i = i * dt with
    t_0 = 0 (trajectory start, no observation) and one observation at
    each of t_1 .. t_K.  ``bs_ids[k]`` names the transmitter of the
    observation at t_{k+1}.
    """

    times: np.ndarray  # (K,) observation instants t_1..t_K
    bs_ids: np.ndarray  # (K,)
    true_velocities: np.ndarray  # (K+1, 2) at t_0..t_K
    measured_velocities: np.ndarray  # (K+1, 2)
    true_positions: np.ndarray  # (K+1, 2)
    true_headings: np.ndarray  # (K+1,)


def build_mobility(scenario: ScenarioConfig, rng: np.random.Generator) -> MobilityProfile:
    """Roll the deterministic trajectory and its noisy velocity readings.

    The heading integrates the turn rate -a_t / speed between samples
    (constant transversal acceleration); velocity noise is drawn here,
    in one vectorized call, before any channel randomness.
    """
    dt = scenario.event_interval
    k = scenario.event_count
    mob = scenario.mobility

    t_samples = np.arange(k + 1) * dt
    speeds = speed_profile(t_samples, scenario.duration, mob.speed_start_kmh, mob.speed_peak_kmh)

    headings = np.empty(k + 1)
    headings[0] = scenario.initial_heading
    for i in range(k):
        turn_rate = -mob.transversal_acceleration / speeds[i] if speeds[i] > 0.0 else 0.0
        headings[i + 1] = headings[i] + turn_rate * dt

    true_velocities = speeds[:, None] * np.column_stack([np.cos(headings), np.sin(headings)])
    noise = rng.standard_normal((k + 1, 2))
    measured_velocities = true_velocities + mob.velocity_noise_fraction * np.abs(true_velocities) * noise

    true_positions = reconstruct_trajectory(
        scenario.initial_position, true_velocities[:-1], np.full(k, dt)
    )
    return MobilityProfile(
        times=t_samples[1:],
        bs_ids=np.arange(k) % scenario.bs_count,
        true_velocities=true_velocities,
        measured_velocities=measured_velocities,
        true_positions=true_positions,
        true_headings=headings,
    )


def make_estimators(scenario: ScenarioConfig, initial_velocity) -> dict:
    """Instantiate the enabled estimators on the scenario grid."""
    points = scenario.grid.points()
    out = {}
    for label in scenario.estimators:
        cls = ESTIMATOR_CLASSES[label]
        kwargs = dict(
            grid_points=points,
            cfg=scenario.array,
            initial_velocity=initial_velocity,
            initial_heading=scenario.initial_heading,
        )
        if cls is PseudoMlEstimator:
            kwargs.update(
                max_path_count=scenario.multipath.d_max,
                tolerance=np.deg2rad(scenario.association_tolerance_deg),
            )
            from .spectral import default_angle_grid

            kwargs["angle_grid"] = default_angle_grid(scenario.music_grid_points)
        elif cls is SinglePathEstimator:
            pass
        out[label] = cls(**kwargs)
    return out


@dataclass(frozen=True)
class TrialResult:
    """Per-step record of one Monte Carlo trial."""

    trial_index: int
    times: np.ndarray  # (K,)
    errors: dict  # label -> (K,) position error in metres
    initial_estimates: dict  # label -> (K, 2) estimated p(t_0) per step
    current_estimates: dict  # label -> (K, 2) estimated p(t_k) per step
    candidate_counts: dict  # label -> (K,)


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Per-trial generator; the (master_seed, index) pair is the seed key."""
    return np.random.default_rng([master_seed, trial_index])


def run_trial(scenario: ScenarioConfig, trial_index: int) -> TrialResult:
    """Execute one seeded trial and return per-step errors and estimates."""
    rng = trial_rng(scenario.master_seed, trial_index)
    profile = build_mobility(scenario, rng)
    estimators = make_estimators(scenario, profile.measured_velocities[0])

    k = len(profile.times)
    errors = {label: np.empty(k) for label in estimators}
    initials = {label: np.empty((k, 2)) for label in estimators}
    currents = {label: np.empty((k, 2)) for label in estimators}
    counts = {label: np.empty(k, dtype=np.int64) for label in estimators}

    dt = scenario.event_interval
    bs_xy = np.asarray(scenario.bs_positions, dtype=float)
    for e in range(k):
        position = profile.true_positions[e + 1]
        heading = profile.true_headings[e + 1]
        bs = bs_xy[profile.bs_ids[e]]
        distance = float(np.hypot(*(bs - position)))
        bearing = los_bearing(position, bs)

        blocked = bool(rng.random() < scenario.multipath.p_nlos)
        d_i = int(rng.integers(scenario.multipath.d_min, scenario.multipath.d_max + 1))
        realization = sample_multipath(
            rng,
            scenario.channel,
            d_i,
            distance,
            los_blocked=blocked,
            los_aoa=bearing,
        )
        obs = generate_observation(
            rng,
            realization,
            heading,
            scenario.array,
            scenario.snapshots,
            scenario.channel.noise_floor,
            timestamp=float(profile.times[e]),
            bs_id=int(profile.bs_ids[e]),
        )

        velocity = profile.measured_velocities[e + 1]
        for label, estimator in estimators.items():
            est = estimator.step(obs, bs, velocity, dt)
            errors[label][e] = float(np.hypot(*(est.current - position)))
            initials[label][e] = est.initial
            currents[label][e] = est.current
            counts[label][e] = est.candidate_count

    return TrialResult(
        trial_index=trial_index,
        times=profile.times,
        errors=errors,
        initial_estimates=initials,
        current_estimates=currents,
        candidate_counts=counts,
    )


def aggregate_rmse(errors: np.ndarray) -> np.ndarray:
    """Root-mean-square over trials (axis 0) of per-step errors."""
    errors = np.atleast_2d(np.asarray(errors, dtype=float))
    return np.sqrt(np.mean(errors**2, axis=0))


@dataclass(frozen=True)
class RmseSeries:
    """RMSE-versus-time curves of one campaign, with pooling support."""

    scenario_name: str
    config_hash: str
    master_seed: int
    times: np.ndarray  # (K,)
    mean_square: dict  # label -> (K,) mean squared error over trials
    trials: int

    def rmse(self, label: str) -> np.ndarray:
        return np.sqrt(self.mean_square[label])

    @property
    def labels(self) -> list[str]:
        return sorted(self.mean_square)


def pool_series(a: RmseSeries, b: RmseSeries) -> RmseSeries:
    """Combine two campaigns of the same scenario by pooling squared errors."""
    if a.config_hash != b.config_hash:
        raise ValueError("cannot pool campaigns with different configurations")
    if sorted(a.mean_square) != sorted(b.mean_square):
        raise ValueError("cannot pool campaigns with different estimator sets")
    total = a.trials + b.trials
    pooled = {
        label: (a.trials * a.mean_square[label] + b.trials * b.mean_square[label]) / total
        for label in a.mean_square
    }
    return RmseSeries(
        scenario_name=a.scenario_name,
        config_hash=a.config_hash,
        master_seed=a.master_seed,
        times=a.times,
        mean_square=pooled,
        trials=total,
    )


def run_monte_carlo(scenario: ScenarioConfig, trial_indices=None) -> tuple[RmseSeries, list[TrialResult]]:
    """Run a campaign and aggregate RMSE-versus-time per estimator.

    ``trial_indices`` defaults to ``range(scenario.trials)``; passing an
    explicit range allows splitting a campaign across processes while
    reproducing the exact same draws per trial.
    """
    indices = range(scenario.trials) if trial_indices is None else list(trial_indices)
    results = [run_trial(scenario, i) for i in indices]
    if results:
        times = results[0].times
        labels = list(results[0].errors)
    else:
        times = np.array([])
        labels = []
    mean_square = {
        label: np.mean(np.stack([r.errors[label] for r in results]) ** 2, axis=0)
        if results
        else np.array([])
        for label in labels
    }
    series = RmseSeries(
        scenario_name=scenario.name,
        config_hash=scenario.config_hash(),
        master_seed=scenario.master_seed,
        times=times,
        mean_square=mean_square,
        trials=len(results),
    )
    return series, results


def _header_lines(scenario: ScenarioConfig) -> list[str]:
    return [
        f"config_hash={scenario.config_hash()}",
        f"master_seed={scenario.master_seed}",
        f"scenario={scenario.name}",
    ]


def write_rmse_csv(path, series: RmseSeries, scenario: ScenarioConfig) -> None:
    """Long-format RMSE table: t_s, estimator, rmse_m, trials."""
    with open(path, "w", encoding="utf-8") as fh:
        for line in _header_lines(scenario):
            fh.write(f"# {line}\n")
        fh.write("t_s,estimator,rmse_m,trials\n")
        for label in series.labels:
            rmse = series.rmse(label)
            for t, r in zip(series.times, rmse):
                fh.write(f"{t:.6f},{label},{r:.9g},{series.trials}\n")


def write_trace_csv(path, result: TrialResult, scenario: ScenarioConfig) -> None:
    """Per-step estimate trace of one trial.

    Columns: step index k (1-based), time, estimator, estimated initial
    position, estimated current position, candidate-set size.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for line in _header_lines(scenario):
            fh.write(f"# {line}\n")
        fh.write(f"# trial={result.trial_index}\n")
        fh.write("k,t_s,estimator,p0_x_m,p0_y_m,px_m,py_m,candidates\n")
        for label in sorted(result.errors):
            for e in range(len(result.times)):
                p0 = result.initial_estimates[label][e]
                p = result.current_estimates[label][e]
                fh.write(
                    f"{e + 1},{result.times[e]:.6f},{label},"
                    f"{p0[0]:.9g},{p0[1]:.9g},{p[0]:.9g},{p[1]:.9g},"
                    f"{result.candidate_counts[label][e]}\n"
                )

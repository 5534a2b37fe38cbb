"""Grid-based direct position estimators sharing one dead-reckoned grid.

All three estimators score a fixed grid of initial-position hypotheses.
Between observations the whole grid is translated by the integrated
measured velocity, so a hypothesis fixes the entire trial trajectory.
Scores accumulate recursively observation by observation:

* pseudo-ML: per observation, estimate multipath angles and amplitudes
  (smoothed MUSIC + Capon), rebuild the expected spatial signature for
  each hypothesis whose trial LOS angle matches an estimated angle, and
  accumulate the energy of the matched-filtered snapshot projected onto
  that signature.  Hypotheses that never fail to associate form the
  candidate set; the highest accumulated score among them wins.
* max-power: accumulate the output energy of a Capon beamformer steered
  at each hypothesis' trial LOS angle.  Highest score wins.
* single-path: fit a single-path data model per hypothesis and
  accumulate the least-squares residual.  Lowest residual wins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Observation
from .geometry import ArrayConfig, global_to_local, heading_of, steering, wrap_bearing
from .spectral import (
    capon_weights,
    default_angle_grid,
    estimate_amplitudes,
    fb_covariance,
    forward_covariance,
    smooth_music,
)

PSEUDO_ML = "pseudo_ml"
MAX_POWER = "max_power"
SINGLE_PATH = "single_path"


@dataclass(frozen=True)
class ProjectorEstimate:
    """Rank-one orthogonal projector onto an estimated spatial signature."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("projector must be square")


def make_projector(signature: np.ndarray) -> ProjectorEstimate:
    """P = x x^H / ||x||^2 for a nonzero signature x."""
    x = np.asarray(signature, dtype=complex).reshape(-1)
    energy = float(np.real(x.conj() @ x))
    if energy == 0.0:
        raise ValueError("cannot project onto a zero signature")
    return ProjectorEstimate(matrix=np.outer(x, x.conj()) / energy)


def compressed_score(projector: ProjectorEstimate, matched: np.ndarray, symbol_energy: float) -> float:
    """Concentrated log-likelihood contribution ||P ybar||^2 / cbar.

    ``matched`` is the matched-filtered snapshot ybar = sum_n y_n conj(c_n)
    and ``symbol_energy`` is cbar = sum_n |c_n|^2.  Maximizing the summed
    score over hypotheses is equivalent to minimizing the residual of the
    observation model with the complex gain profiled out.
    """
    if symbol_energy <= 0.0:
        raise ValueError("symbol_energy must be positive")
    projected = projector.matrix @ matched
    return float(np.real(projected.conj() @ projected)) / symbol_energy


@dataclass(frozen=True)
class PositionEstimate:
    """Selected hypothesis after some number of observations."""

    estimator: str
    step: int
    initial: np.ndarray  # estimated p(t_0)
    current: np.ndarray  # initial advanced by the integrated measured velocity
    candidate_count: int


def trial_aoas(points: np.ndarray, displacement: np.ndarray, heading: float, bs_position: np.ndarray) -> np.ndarray:
    """Local trial LOS angles for every hypothesis at the current step.

    Each grid point is advanced by the shared dead-reckoned displacement;
    the bearing towards the BS is then folded into the array frame.
    """
    now = points + displacement
    delta = np.asarray(bs_position, dtype=float) - now
    bearings = wrap_bearing(np.arctan2(delta[:, 1], delta[:, 0]))
    return global_to_local(bearings, heading)


def matched_snapshot(obs: Observation) -> tuple[np.ndarray, float]:
    """Matched filter over snapshots: (ybar, cbar)."""
    ybar = obs.samples @ obs.symbols.conj()
    cbar = float(np.real(obs.symbols.conj() @ obs.symbols))
    return ybar, cbar


def pseudo_ml_increments(
    obs: Observation,
    bs_position: np.ndarray,
    displacement: np.ndarray,
    heading: float,
    points: np.ndarray,
    cfg: ArrayConfig,
    signal_dim: int,
    tolerance: float,
    angle_grid: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-hypothesis score and miss increments for one observation.

    The multipath angle set and Capon amplitudes are estimated once from
    the observation; every hypothesis whose trial LOS angle lies within
    ``tolerance`` of an estimated angle gets the compressed-likelihood
    score of the signature rebuilt with its own trial angle substituted
    for the associated path.  All other hypotheses get a miss count.
    """
    m = cfg.element_count
    r_fb = fb_covariance(forward_covariance(obs.samples, cfg.subarray_length))
    est = smooth_music(r_fb, signal_dim, angle_grid, cfg)
    weights = capon_weights(r_fb, est.angles, cfg)
    alphas = estimate_amplitudes(weights, obs.samples[: cfg.subarray_length], obs.symbols)

    ybar, cbar = matched_snapshot(obs)

    aoas = trial_aoas(points, displacement, heading, bs_position)
    gaps = np.abs(aoas[:, None] - est.angles[None, :])
    nearest = np.argmin(gaps, axis=1)
    associated = gaps[np.arange(len(aoas)), nearest] <= tolerance

    # full-length signatures: x_hat = alpha_* a(trial) + sum_{j != *} alpha_j a(theta_j)
    a_paths = steering(est.angles, m, cfg)  # (M, q)
    total = a_paths @ alphas  # (M,)
    residue = total[:, None] - a_paths * alphas[None, :]  # leave-one-out sums, (M, q)
    a_trial = steering(aoas, m, cfg)  # (M, n)
    signatures = alphas[nearest][None, :] * a_trial + residue[:, nearest]

    projected = np.einsum("mn,m->n", signatures.conj(), ybar)
    energies = np.sum(np.abs(signatures) ** 2, axis=0)
    usable = associated & (energies > 0.0)
    scores = np.zeros(len(aoas))
    np.divide(np.abs(projected) ** 2, energies * cbar, out=scores, where=usable)
    scores[~usable] = 0.0
    return scores, (~usable).astype(np.int64)


def max_power_increments(
    obs: Observation,
    bs_position: np.ndarray,
    displacement: np.ndarray,
    heading: float,
    points: np.ndarray,
    cfg: ArrayConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Capon output energy at each hypothesis' trial LOS angle."""
    r_fb = fb_covariance(forward_covariance(obs.samples, cfg.subarray_length))
    aoas = trial_aoas(points, displacement, heading, bs_position)
    weights = capon_weights(r_fb, aoas, cfg)  # (P, n)
    outputs = weights.conj().T @ obs.samples[: cfg.subarray_length]  # (n, N)
    scores = np.sum(np.abs(outputs) ** 2, axis=1)
    return scores, np.zeros(len(aoas), dtype=np.int64)


def single_path_increments(
    obs: Observation,
    bs_position: np.ndarray,
    displacement: np.ndarray,
    heading: float,
    points: np.ndarray,
    cfg: ArrayConfig,
    gamma_mode: str = "least-squares",
) -> tuple[np.ndarray, np.ndarray]:
    """Single-path model-fit residual per hypothesis.

    The residual sum_n ||y_n - g a(aoa) c_n||^2 is evaluated through its
    algebraic expansion; ``gamma_mode`` selects the gain estimate:
    "least-squares" uses the analytic minimizer a^H ybar / (M cbar),
    "printed" uses the real-valued ratio sum_n |a^H y_n c_n|^2 / (M cbar)
    retained for comparison studies.
    """
    m = cfg.element_count
    ybar, cbar = matched_snapshot(obs)
    total_energy = float(np.sum(np.abs(obs.samples) ** 2))
    aoas = trial_aoas(points, displacement, heading, bs_position)
    a_trial = steering(aoas, m, cfg)  # (M, n)
    matched = np.einsum("mn,m->n", a_trial.conj(), ybar)
    if gamma_mode == "least-squares":
        gains = matched / (m * cbar)
    elif gamma_mode == "printed":
        beamformed = a_trial.conj().T @ obs.samples  # (n, N)
        gains = np.sum(np.abs(beamformed * obs.symbols.conj()[None, :]) ** 2, axis=1) / (m * cbar)
        gains = gains.astype(complex)
    else:
        raise ValueError("gamma_mode must be 'least-squares' or 'printed'")
    residuals = (
        total_energy
        - 2.0 * np.real(gains.conj() * matched)
        + np.abs(gains) ** 2 * m * cbar
    )
    return residuals, np.zeros(len(aoas), dtype=np.int64)


class GridEstimator:
    """Shared recursion: dead reckoning plus per-grid-point accumulators.

    Subclasses provide the per-observation increment rule and the final
    selection rule.  ``step`` consumes observations in arrival order
    together with the velocity measured at the observation instant and
    the time elapsed since the previous one.
    """

    label = "base"

    def __init__(
        self,
        grid_points: np.ndarray,
        cfg: ArrayConfig,
        initial_velocity=(0.0, 0.0),
        initial_heading: float = 0.0,
    ):
        points = np.asarray(grid_points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2 or len(points) == 0:
            raise ValueError("grid_points must be a nonempty (n, 2) array")
        self.points = points
        self.cfg = cfg
        self.displacement = np.zeros(2)
        self.heading = float(initial_heading)
        self.scores = np.zeros(len(points))
        self.miss_counts = np.zeros(len(points), dtype=np.int64)
        self.step_count = 0
        self._held_velocity = np.asarray(initial_velocity, dtype=float).reshape(2)

    def _increments(self, obs: Observation, bs_position: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def _select(self) -> tuple[int, int]:
        """Return (winning index, candidate count)."""
        raise NotImplementedError

    def step(self, obs: Observation, bs_position, velocity, dt: float) -> PositionEstimate:
        """Fold in one observation and return the refreshed estimate.

        Parameters
        ----------
        obs : Observation
        bs_position : array_like, shape (2,)
            Transmitter of this observation.
        velocity : array_like, shape (2,)
            Velocity measured at the observation instant (sets the array
            heading; integrates from the *next* step on).
        dt : float
            Time since the previous observation (or trajectory start).
        """
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        self.displacement = self.displacement + self._held_velocity * dt
        velocity = np.asarray(velocity, dtype=float).reshape(2)
        self.heading = heading_of(velocity, self.heading)
        inc, miss = self._increments(obs, np.asarray(bs_position, dtype=float))
        self.scores = self.scores + inc
        self.miss_counts = self.miss_counts + miss
        self.step_count += 1
        self._held_velocity = velocity
        return self.estimate()

    def estimate(self) -> PositionEstimate:
        idx, n_candidates = self._select()
        initial = self.points[idx].copy()
        return PositionEstimate(
            estimator=self.label,
            step=self.step_count,
            initial=initial,
            current=initial + self.displacement,
            candidate_count=n_candidates,
        )

    @classmethod
    def from_batch(cls, records, *args, **kwargs):
        """Evaluate the full observation block in one call.

        Recomputes every per-observation increment from the raw stream
        and accumulates in arrival order, reproducing the recursive
        result exactly.  ``records`` is an iterable of
        ``(observation, bs_position, velocity, dt)`` tuples.
        """
        est = cls(*args, **kwargs)
        out = None
        for obs, bs_position, velocity, dt in records:
            out = est.step(obs, bs_position, velocity, dt)
        if out is None:
            raise ValueError("records must contain at least one observation")
        return est, out


class PseudoMlEstimator(GridEstimator):
    """Pseudo-maximum-likelihood DPE with angle association and candidate pruning."""

    label = PSEUDO_ML

    def __init__(
        self,
        grid_points,
        cfg: ArrayConfig,
        max_path_count: int,
        tolerance: float = np.deg2rad(2.0),
        initial_velocity=(0.0, 0.0),
        initial_heading: float = 0.0,
        angle_grid: np.ndarray | None = None,
    ):
        super().__init__(grid_points, cfg, initial_velocity, initial_heading)
        if max_path_count < 0:
            raise ValueError("max_path_count must be nonnegative")
        if not 0 < max_path_count + 1 < cfg.subarray_length:
            raise ValueError(
                "need max_path_count + 1 < subarray_length for a nonempty noise subspace"
            )
        if tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        self.signal_dim = max_path_count + 1
        self.tolerance = float(tolerance)
        self.angle_grid = default_angle_grid() if angle_grid is None else np.asarray(angle_grid)

    def _increments(self, obs, bs_position):
        return pseudo_ml_increments(
            obs,
            bs_position,
            self.displacement,
            self.heading,
            self.points,
            self.cfg,
            self.signal_dim,
            self.tolerance,
            self.angle_grid,
        )

    def _select(self):
        candidates = self.miss_counts == self.miss_counts.min()
        masked = np.where(candidates, self.scores, -np.inf)
        return int(np.argmax(masked)), int(np.count_nonzero(candidates))


class MaxPowerEstimator(GridEstimator):
    """Beamformed-energy DPE: highest accumulated Capon output power wins."""

    label = MAX_POWER

    def _increments(self, obs, bs_position):
        return max_power_increments(
            obs, bs_position, self.displacement, self.heading, self.points, self.cfg
        )

    def _select(self):
        return int(np.argmax(self.scores)), len(self.points)


class SinglePathEstimator(GridEstimator):
    """Single-path ML DPE: lowest accumulated model-fit residual wins."""

    label = SINGLE_PATH

    def __init__(
        self,
        grid_points,
        cfg: ArrayConfig,
        gamma_mode: str = "least-squares",
        initial_velocity=(0.0, 0.0),
        initial_heading: float = 0.0,
    ):
        super().__init__(grid_points, cfg, initial_velocity, initial_heading)
        if gamma_mode not in ("least-squares", "printed"):
            raise ValueError("gamma_mode must be 'least-squares' or 'printed'")
        self.gamma_mode = gamma_mode

    def _increments(self, obs, bs_position):
        return single_path_increments(
            obs,
            bs_position,
            self.displacement,
            self.heading,
            self.points,
            self.cfg,
            self.gamma_mode,
        )

    def _select(self):
        return int(np.argmin(self.scores)), len(self.points)


ESTIMATOR_CLASSES = {
    PSEUDO_ML: PseudoMlEstimator,
    MAX_POWER: MaxPowerEstimator,
    SINGLE_PATH: SinglePathEstimator,
}

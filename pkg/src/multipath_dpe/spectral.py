"""Spatially smoothed covariance estimation and angle/amplitude front end.

Coherent multipath makes the plain sample covariance rank deficient, which
breaks subspace DoA methods.  Sliding-subarray (forward) smoothing followed
by forward-backward averaging restores rank; MUSIC then runs on the smoothed
P x P covariance and a Capon beamformer per estimated angle recovers complex
path amplitudes from the first subarray.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg
from scipy.signal import find_peaks

from .geometry import ArrayConfig, steering


@dataclass(frozen=True)
class SmoothedCovariance:
    """Hermitian P x P covariance with its smoothing provenance."""

    matrix: np.ndarray
    kind: Literal["forward", "forward-backward"]

    def __post_init__(self) -> None:
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("covariance must be a square matrix")
        if self.kind not in ("forward", "forward-backward"):
            raise ValueError(f"unknown smoothing kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def forward_covariance(samples: np.ndarray, subarray_length: int) -> SmoothedCovariance:
    """Forward-only smoothed covariance over S = M - P + 1 subarrays.

    Parameters
    ----------
    samples : ndarray, shape (M, N)
        Snapshot block.
    subarray_length : int
        P, with 1 <= P <= M.

    Returns
    -------
    SmoothedCovariance
        Average of the per-subarray sample covariances (1/N) Y_j Y_j^H.
    """
    samples = np.asarray(samples)
    m, n = samples.shape
    p = subarray_length
    if not 1 <= p <= m:
        raise ValueError(f"subarray_length must lie in [1, {m}]")
    s = m - p + 1
    r = np.zeros((p, p), dtype=complex)
    for j in range(s):
        block = samples[j : j + p]
        r += block @ block.conj().T
    r /= s * n
    # hermitize to kill accumulation asymmetry
    r = 0.5 * (r + r.conj().T)
    return SmoothedCovariance(matrix=r, kind="forward")


def fb_covariance(forward: SmoothedCovariance) -> SmoothedCovariance:
    """Forward-backward average (R + J conj(R) J) / 2.

    J is the exchange matrix; flipping both axes of the conjugate
    implements J conj(R) J without forming J.  Input must be a
    forward-only smoothed covariance.
    """
    if forward.kind != "forward":
        raise ValueError("fb_covariance expects a forward-only covariance")
    r = forward.matrix
    fb = 0.5 * (r + np.flip(r.conj()))
    fb = 0.5 * (fb + fb.conj().T)
    return SmoothedCovariance(matrix=fb, kind="forward-backward")


def default_angle_grid(n_points: int = 2048) -> np.ndarray:
    """Angle grid uniform in sin(theta) over the front half-plane.

    Cell-centred so the open interval (-pi/2, pi/2) is never touched:
    sin values are -1 + (2k + 1)/n for k = 0..n-1.
    """
    if n_points < 2:
        raise ValueError("need at least two grid points")
    sines = -1.0 + (2.0 * np.arange(n_points) + 1.0) / n_points
    return np.arcsin(sines)


@dataclass(frozen=True)
class AoaEstimateSet:
    """Angles (and optionally amplitudes) extracted from one observation.

    ``angles`` are sorted by descending pseudospectrum peak height;
    ``degenerate`` marks a spectrum with no strict local maxima, in which
    case all entries are padded grid points and downstream consumers
    should expect no usable structure.
    """

    angles: np.ndarray
    peak_heights: np.ndarray
    amplitudes: np.ndarray | None
    pseudospectrum: np.ndarray
    grid: np.ndarray
    degenerate: bool

    def __post_init__(self) -> None:
        if len(self.angles) != len(self.peak_heights):
            raise ValueError("angles and peak_heights must have equal length")
        if self.amplitudes is not None and len(self.amplitudes) != len(self.angles):
            raise ValueError("amplitudes must match angles")


def _parabolic_refine(sines: np.ndarray, values: np.ndarray, idx: int) -> float:
    """Three-point parabolic peak interpolation on the uniform sine grid."""
    if idx <= 0 or idx >= len(sines) - 1:
        return float(sines[idx])
    y0, y1, y2 = values[idx - 1], values[idx], values[idx + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return float(sines[idx])
    delta = 0.5 * (y0 - y2) / denom
    delta = float(np.clip(delta, -0.5, 0.5))
    step = sines[1] - sines[0]
    return float(sines[idx] + delta * step)


def smooth_music(
    cov: SmoothedCovariance,
    signal_dim: int,
    grid: np.ndarray,
    cfg: ArrayConfig,
) -> AoaEstimateSet:
    """MUSIC pseudospectrum and peak angles on a smoothed covariance.

    Parameters
    ----------
    cov : SmoothedCovariance
        P x P smoothed covariance (forward or forward-backward).
    signal_dim : int
        Assumed signal-subspace dimension, ``0 < signal_dim < P``; the
        noise subspace keeps the P - signal_dim smallest eigenvectors.
    grid : ndarray
        Candidate local angles, uniform in sin(theta).
    cfg : ArrayConfig

    Returns
    -------
    AoaEstimateSet
        ``signal_dim`` angles sorted by descending peak height, refined
        by parabolic interpolation in the sine domain.  If fewer strict
        local maxima exist, the strongest remaining grid points pad the
        list; a spectrum with no maxima at all sets ``degenerate`` and
        emits a warning.
    """
    p = cov.dim
    if not 0 < signal_dim < p:
        raise ValueError(f"signal_dim must lie in (0, {p}), got {signal_dim}")
    eigvals, eigvecs = scipy.linalg.eigh(cov.matrix)
    noise_basis = eigvecs[:, : p - signal_dim]  # ascending order: smallest first

    a = steering(grid, p, cfg)
    denom = np.sum(np.abs(noise_basis.conj().T @ a) ** 2, axis=0)
    spectrum = 1.0 / np.maximum(denom, 1e-300)

    peak_idx, _ = find_peaks(spectrum)
    # a numerically flat spectrum still ripples at machine precision;
    # treat relative variation below 1e-9 as featureless
    if spectrum.max() - spectrum.min() <= 1e-9 * spectrum.max():
        peak_idx = np.array([], dtype=int)
    degenerate = len(peak_idx) == 0
    if degenerate:
        warnings.warn(
            "degenerate MUSIC pseudospectrum: no local maxima; "
            "returning strongest grid points",
            RuntimeWarning,
            stacklevel=2,
        )

    # order found peaks by height, ties toward the smaller angle
    order = np.lexsort((grid[peak_idx], -spectrum[peak_idx]))
    peak_idx = peak_idx[order][:signal_dim]

    sines = np.sin(grid)
    refined = [np.arcsin(np.clip(_parabolic_refine(sines, spectrum, i), -1.0, 1.0)) for i in peak_idx]
    heights = list(spectrum[peak_idx])

    if len(refined) < signal_dim:
        taken = np.zeros(len(grid), dtype=bool)
        taken[peak_idx] = True
        rest = np.where(~taken)[0]
        order = np.lexsort((grid[rest], -spectrum[rest]))
        for i in rest[order][: signal_dim - len(refined)]:
            refined.append(float(grid[i]))
            heights.append(float(spectrum[i]))

    angles = np.asarray(refined)
    heights = np.asarray(heights)
    order = np.lexsort((angles, -heights))
    return AoaEstimateSet(
        angles=angles[order],
        peak_heights=heights[order],
        amplitudes=None,
        pseudospectrum=spectrum,
        grid=np.asarray(grid),
        degenerate=degenerate,
    )


def _loaded(cov: SmoothedCovariance) -> np.ndarray:
    """Diagonally loaded copy, epsilon = 1e-6 * trace(R) / P."""
    r = cov.matrix
    eps = 1e-6 * np.real(np.trace(r)) / cov.dim
    return r + eps * np.eye(cov.dim)


def capon_weights(cov: SmoothedCovariance, aoas, cfg: ArrayConfig) -> np.ndarray:
    """Distortionless Capon weights w = R^-1 a / (a^H R^-1 a) per angle.

    Parameters
    ----------
    cov : SmoothedCovariance
        P x P covariance; diagonal loading 1e-6 * trace(R)/P is applied.
    aoas : float or array_like, shape (q,)
        Look angle(s) in the local frame.
    cfg : ArrayConfig

    Returns
    -------
    ndarray
        Shape (P,) for scalar input, else (P, q).

    Raises
    ------
    numpy.linalg.LinAlgError
        If the loaded covariance is still singular.
    """
    scalar = np.ndim(aoas) == 0
    a = steering(np.atleast_1d(np.asarray(aoas, dtype=float)), cov.dim, cfg)
    solved = np.linalg.solve(_loaded(cov), a)
    denom = np.real(np.sum(a.conj() * solved, axis=0))
    if np.any(denom <= 0.0) or not np.all(np.isfinite(denom)):
        raise np.linalg.LinAlgError("covariance not positive definite at look angle")
    w = solved / denom
    return w[:, 0] if scalar else w


def estimate_amplitudes(weights: np.ndarray, samples: np.ndarray, symbols: np.ndarray) -> np.ndarray:
    """Snapshot-averaged complex amplitudes through per-angle beamformers.

    alpha_s = sum_n (w_s^H y_n) conj(c_n) / sum_n |c_n|^2, evaluated on
    the first-subarray snapshot block.

    Parameters
    ----------
    weights : ndarray, shape (P,) or (P, q)
        Beamformer per estimated angle.
    samples : ndarray, shape (P, N)
        First-subarray rows of the observation.
    symbols : ndarray, shape (N,)
        Known pilots.
    """
    weights = np.asarray(weights)
    scalar = weights.ndim == 1
    w = weights[:, None] if scalar else weights
    symbols = np.asarray(symbols)
    if samples.shape[0] != w.shape[0]:
        raise ValueError("weights and samples disagree on subarray length")
    if samples.shape[1] != len(symbols):
        raise ValueError("samples and symbols disagree on snapshot count")
    matched = samples @ symbols.conj()
    energy = np.real(np.sum(symbols * symbols.conj()))
    alphas = (w.conj().T @ matched) / energy
    return complex(alphas[0]) if scalar else alphas


def write_pseudospectrum_csv(path, grid: np.ndarray, spectrum: np.ndarray, header_lines=()) -> None:
    """Dump pseudospectrum samples as ``angle_rad,power`` rows."""
    with open(path, "w", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("angle_rad,power\n")
        for angle, power in zip(grid, spectrum):
            fh.write(f"{angle:.12g},{power:.12g}\n")

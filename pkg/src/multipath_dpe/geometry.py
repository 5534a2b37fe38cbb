"""Planar geometry for a mobile uniform linear array (ULA).

The receiver carries a half-wavelength ULA whose broadside (normal)
points along the direction of travel.  Angles of arrival are therefore
measured in the local array frame: a global bearing is folded into the
front half-plane because a linear array cannot tell front from back.

Conventions
-----------
* Global bearings are math-positive angles in ``[0, 2*pi)`` measured
  from the +x axis.
* Local angles of arrival live in ``[-pi/2, pi/2]`` relative to the
  array normal (the heading vector).
* Element ``k`` of the steering vector carries phase
  ``exp(1j * k * omega * d * sin(theta))`` with ``omega = 2*pi/lambda``
  and spacing ``d = lambda/2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ArrayConfig:
    """Static description of the receive ULA.

    Parameters
    ----------
    element_count : int
        Number of physical elements M.
    subarray_length : int
        Length P of the sliding subarrays used for spatial smoothing,
        ``1 <= P <= M``.
    carrier_frequency : float
        Carrier in Hz; sets the wavelength and hence the spacing.
    """

    element_count: int
    subarray_length: int
    carrier_frequency: float

    def __post_init__(self) -> None:
        if self.element_count < 1:
            raise ValueError("element_count must be a positive integer")
        if not 1 <= self.subarray_length <= self.element_count:
            raise ValueError(
                f"subarray_length must lie in [1, {self.element_count}], "
                f"got {self.subarray_length}"
            )
        if self.carrier_frequency <= 0.0:
            raise ValueError("carrier_frequency must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def element_spacing(self) -> float:
        """Inter-element spacing d = lambda / 2."""
        return 0.5 * self.wavelength

    @property
    def wavenumber(self) -> float:
        """Angular wavenumber omega = 2*pi / lambda."""
        return TWO_PI / self.wavelength

    @property
    def subarray_count(self) -> int:
        """Number of sliding subarrays S = M - P + 1."""
        return self.element_count - self.subarray_length + 1

    @property
    def phase_pitch(self) -> float:
        """Per-element phase slope omega * d (equals pi for d = lambda/2)."""
        return self.wavenumber * self.element_spacing


def wrap_bearing(angle):
    """Wrap an angle (scalar or array) into ``[0, 2*pi)``."""
    return np.mod(angle, TWO_PI)


def los_bearing(origin, target):
    """Global bearing of ``target`` as seen from ``origin``.

    Parameters
    ----------
    origin, target : array_like, shape (2,) or (n, 2)
        Planar coordinates in metres.

    Returns
    -------
    float or ndarray
        ``atan2(dy, dx)`` wrapped into ``[0, 2*pi)``.

    Raises
    ------
    ValueError
        If any origin/target pair coincides (bearing undefined).
    """
    origin = np.asarray(origin, dtype=float)
    target = np.asarray(target, dtype=float)
    delta = target - origin
    dist = np.hypot(delta[..., 0], delta[..., 1])
    if np.any(dist == 0.0):
        raise ValueError("bearing undefined for coincident points")
    bearing = wrap_bearing(np.arctan2(delta[..., 1], delta[..., 0]))
    return float(bearing) if bearing.ndim == 0 else bearing


def global_to_local(bearing, heading):
    """Fold a global bearing into the local array frame.

    The array normal points along ``heading``; a linear array observes
    mirrored front/rear arrivals identically, so the local angle is
    ``asin(sin(bearing - heading))``, which lands in ``[-pi/2, pi/2]``.

    Accepts scalars or broadcastable arrays.
    """
    s = np.sin(np.asarray(bearing, dtype=float) - np.asarray(heading, dtype=float))
    # clip guards asin against |s| = 1 + eps from roundoff
    local = np.arcsin(np.clip(s, -1.0, 1.0))
    return float(local) if local.ndim == 0 else local


def steering(aoa, length: int, cfg: ArrayConfig) -> np.ndarray:
    """Steering vector(s) of the first ``length`` elements.

    Parameters
    ----------
    aoa : float or array_like, shape (n,)
        Local angle(s) of arrival in radians.
    length : int
        Number of leading elements, ``1 <= length <= cfg.element_count``.
    cfg : ArrayConfig

    Returns
    -------
    ndarray
        Shape ``(length,)`` for scalar input, else ``(length, n)``;
        element ``k`` is ``exp(1j * k * omega * d * sin(aoa))``.
    """
    if not 1 <= length <= cfg.element_count:
        raise ValueError(f"length must lie in [1, {cfg.element_count}]")
    aoa = np.asarray(aoa, dtype=float)
    phase = cfg.phase_pitch * np.sin(aoa)
    k = np.arange(length)
    if phase.ndim == 0:
        return np.exp(1j * k * phase)
    return np.exp(1j * np.outer(k, phase))


def reconstruct_trajectory(p0, velocities, dts) -> np.ndarray:
    """Dead-reckon positions from an anchor point and velocity readings.

    Position ``k`` is ``p0`` plus the cumulative sum of
    ``velocities[i] * dts[i]`` for ``i < k``; the velocity read at the
    start of each interval is held constant across it.

    Parameters
    ----------
    p0 : array_like, shape (2,)
        Anchor position.
    velocities : array_like, shape (n, 2)
        Velocity read at the start of each interval, m/s.
    dts : array_like, shape (n,)
        Interval lengths in seconds, all strictly positive.

    Returns
    -------
    ndarray, shape (n + 1, 2)
        Row 0 is ``p0`` itself.
    """
    p0 = np.asarray(p0, dtype=float).reshape(2)
    velocities = np.asarray(velocities, dtype=float).reshape(-1, 2)
    dts = np.asarray(dts, dtype=float).reshape(-1)
    if velocities.shape[0] != dts.shape[0]:
        raise ValueError("velocities and dts must have equal length")
    if np.any(dts <= 0.0):
        raise ValueError("time steps must be strictly positive")
    steps = velocities * dts[:, None]
    out = np.empty((len(dts) + 1, 2))
    out[0] = p0
    np.cumsum(steps, axis=0, out=out[1:])
    out[1:] += p0
    return out


def heading_of(velocity, fallback: float) -> float:
    """Heading angle of a velocity vector; ``fallback`` when speed is zero."""
    vx, vy = float(velocity[0]), float(velocity[1])
    if vx == 0.0 and vy == 0.0:
        return fallback
    return float(wrap_bearing(np.arctan2(vy, vx)))


def headings_from_velocities(velocities, initial_heading: float) -> np.ndarray:
    """Per-sample headings, holding the last valid one across zero-speed gaps."""
    velocities = np.asarray(velocities, dtype=float).reshape(-1, 2)
    out = np.empty(len(velocities))
    last = float(initial_heading)
    for i, v in enumerate(velocities):
        last = heading_of(v, last)
        out[i] = last
    return out

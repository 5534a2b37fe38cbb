"""Narrowband multipath channel between a fixed BS and the array receiver.

Each observation consists of N known unit-modulus pilot symbols received
through a channel with one (possibly blocked) line-of-sight path and D
specular reflections.  Reflections follow a dense-scattering recipe:
angles and phases uniform, excess delays tied to the phases plus an
integer number of carrier cycles, amplitudes drawn from an exponential
power-delay profile.  A common complex gain carries distance-dependent
path loss with uniform phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, ArrayConfig, global_to_local, steering

BOLTZMANN = 1.380649e-23
REFERENCE_TEMPERATURE = 290.0

# unit-energy QPSK alphabet, moduli exactly 1
QPSK = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2.0)


def thermal_noise_power(bandwidth: float, temperature: float = REFERENCE_TEMPERATURE) -> float:
    """k_B * T * B in watts."""
    return BOLTZMANN * temperature * bandwidth


@dataclass(frozen=True)
class ChannelParams:
    """Propagation constants shared by every observation of a scenario.

    Attributes
    ----------
    path_loss_exponent : float
        Log-distance exponent eta.
    reference_distance : float
        Path-loss reference d0 in metres.
    coherence_bandwidth : float
        Channel coherence bandwidth B_c in Hz.
    doppler_spread : float
        Doppler spread B_D in Hz.
    rms_delay_spread : float
        RMS delay spread sigma_tau of the power-delay profile, seconds.
    transmit_power_dbm : float
        BS transmit power in dBm.
    noise_floor : float
        Receiver noise power sigma^2 per element, watts.
    carrier_frequency : float
        Carrier f_c in Hz.
    pdp_amplitude : str
        "sqrt" draws path amplitudes as sqrt(PDP(tau)) (power profile
        interpreted as power), "power" uses PDP(tau) directly.
    """

    path_loss_exponent: float = 4.0
    reference_distance: float = 1.0
    coherence_bandwidth: float = 250e3
    doppler_spread: float = 512.0
    rms_delay_spread: float = 677e-9
    transmit_power_dbm: float = 18.0
    noise_floor: float = field(default=thermal_noise_power(37.5e3))
    carrier_frequency: float = 5.9e9
    pdp_amplitude: str = "sqrt"

    def __post_init__(self) -> None:
        if self.path_loss_exponent <= 0.0:
            raise ValueError("path_loss_exponent must be positive")
        if self.reference_distance <= 0.0:
            raise ValueError("reference_distance must be positive")
        if self.rms_delay_spread <= 0.0:
            raise ValueError("rms_delay_spread must be positive")
        if self.coherence_bandwidth <= self.doppler_spread:
            raise ValueError("coherence_bandwidth must exceed doppler_spread")
        if self.noise_floor < 0.0:
            raise ValueError("noise_floor must be nonnegative")
        if self.carrier_frequency <= 0.0:
            raise ValueError("carrier_frequency must be positive")
        if self.pdp_amplitude not in ("sqrt", "power"):
            raise ValueError("pdp_amplitude must be 'sqrt' or 'power'")


@dataclass(frozen=True)
class MultipathRealization:
    """One draw of the channel between a BS and the receiver.

    ``los_aoa`` is the global bearing of the BS; ``aoas`` are global
    bearings of the reflections.  ``gamma`` multiplies the whole field.
    When ``los_blocked`` the LOS term is omitted and ``los_aoa`` is
    never read by the signal synthesis.
    """

    los_aoa: float
    los_blocked: bool
    gamma: complex
    aoas: np.ndarray
    gains: np.ndarray
    delays: np.ndarray

    @property
    def path_count(self) -> int:
        return len(self.aoas)


@dataclass(frozen=True)
class Observation:
    """Array snapshot block received from one BS at one instant."""

    samples: np.ndarray  # (M, N) complex
    symbols: np.ndarray  # (N,) unit-modulus pilots
    timestamp: float
    bs_id: int

    def __post_init__(self) -> None:
        if self.samples.ndim != 2 or self.samples.shape[1] != len(self.symbols):
            raise ValueError("samples must be (M, N) with N matching symbols")
        if len(self.symbols) < 1:
            raise ValueError("need at least one snapshot")
        if not np.allclose(np.abs(self.symbols), 1.0, atol=1e-12):
            raise ValueError("pilot symbols must have unit modulus")

    @property
    def snapshot_count(self) -> int:
        return len(self.symbols)


def path_loss_db(distance: float, params: ChannelParams) -> float:
    """Log-distance path loss 10 * eta * log10(d / d0) in dB."""
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    return 10.0 * params.path_loss_exponent * np.log10(distance / params.reference_distance)


def power_delay_profile(delay, params: ChannelParams):
    """Exponential PDP  exp(-tau / sigma_tau), unit power at zero delay."""
    delay = np.asarray(delay, dtype=float)
    if np.any(delay < 0.0):
        raise ValueError("delays must be nonnegative")
    p = np.exp(-delay / params.rms_delay_spread)
    return float(p) if p.ndim == 0 else p


def pdp_amplitude(delay, params: ChannelParams):
    """Path amplitude drawn from the PDP per ``params.pdp_amplitude``."""
    p = power_delay_profile(delay, params)
    return np.sqrt(p) if params.pdp_amplitude == "sqrt" else p


def large_scale_gain(rng: np.random.Generator, distance: float, params: ChannelParams) -> complex:
    """Common gain gamma: path-loss magnitude, uniform phase.

    ``|gamma|^2`` equals the received power P_T * 10^(-L(d)/10) in watts
    for the unit-power pilot signal.
    """
    p_t = 10.0 ** ((params.transmit_power_dbm - 30.0) / 10.0)
    magnitude = np.sqrt(p_t * 10.0 ** (-path_loss_db(distance, params) / 10.0))
    return magnitude * np.exp(1j * rng.uniform(0.0, TWO_PI))


def sample_multipath(
    rng: np.random.Generator,
    params: ChannelParams,
    path_count: int,
    distance: float,
    los_blocked: bool = False,
    los_aoa: float = 0.0,
) -> MultipathRealization:
    """Draw one multipath realization.

    Reflection recipe: global AoA uniform on [0, 2*pi); phase phi uniform
    on [0, 2*pi); excess delay tau = phi/(2*pi*f_c) + zeta/f_c with zeta
    an integer uniform on {0..4}; amplitude from the exponential PDP at
    tau; complex gain beta = amplitude * exp(1j*phi).

    Parameters
    ----------
    path_count : int
        Number of reflections D, >= 0.
    distance : float
        BS-receiver distance, sets |gamma|.
    los_blocked : bool
        Drop the LOS term from the synthesized field.
    los_aoa : float
        Global bearing of the BS (stored; read only when LOS is present).
    """
    if path_count < 0:
        raise ValueError("path_count must be nonnegative")
    gamma = large_scale_gain(rng, distance, params)
    aoas = rng.uniform(0.0, TWO_PI, size=path_count)
    phases = rng.uniform(0.0, TWO_PI, size=path_count)
    cycles = rng.integers(0, 5, size=path_count)
    delays = phases / (TWO_PI * params.carrier_frequency) + cycles / params.carrier_frequency
    gains = pdp_amplitude(delays, params) * np.exp(1j * phases)
    return MultipathRealization(
        los_aoa=float(los_aoa),
        los_blocked=bool(los_blocked),
        gamma=gamma,
        aoas=aoas,
        gains=np.asarray(gains, dtype=complex).reshape(path_count),
        delays=np.asarray(delays, dtype=float).reshape(path_count),
    )


def synthesize_field(realization: MultipathRealization, heading: float, cfg: ArrayConfig) -> np.ndarray:
    """Noise-free spatial signature gamma * (x_los + x_nlos), shape (M,)."""
    m = cfg.element_count
    x = np.zeros(m, dtype=complex)
    if not realization.los_blocked:
        x += steering(global_to_local(realization.los_aoa, heading), m, cfg)
    if realization.path_count:
        a = steering(global_to_local(realization.aoas, heading), m, cfg)
        x += a @ realization.gains
    return realization.gamma * x


def generate_observation(
    rng: np.random.Generator,
    realization: MultipathRealization,
    heading: float,
    cfg: ArrayConfig,
    snapshot_count: int,
    noise_power: float,
    timestamp: float = 0.0,
    bs_id: int = 0,
) -> Observation:
    """Synthesize the (M, N) snapshot block for one observation.

    Snapshot n is ``field * c_n + nu_n`` with known QPSK pilots c_n and
    circular complex Gaussian noise of per-element power ``noise_power``.
    """
    if snapshot_count < 1:
        raise ValueError("snapshot_count must be >= 1")
    if noise_power < 0.0:
        raise ValueError("noise_power must be nonnegative")
    m = cfg.element_count
    symbols = rng.choice(QPSK, size=snapshot_count)
    samples = np.outer(synthesize_field(realization, heading, cfg), symbols)
    if noise_power > 0.0:
        scale = np.sqrt(noise_power / 2.0)
        samples = samples + scale * (
            rng.standard_normal((m, snapshot_count))
            + 1j * rng.standard_normal((m, snapshot_count))
        )
    return Observation(samples=samples, symbols=symbols, timestamp=timestamp, bs_id=bs_id)


def snr_at(distance: float, params: ChannelParams, noise_power: float | None = None) -> float:
    """Per-element LOS SNR |gamma|^2 / sigma^2 in dB at the given distance."""
    sigma2 = params.noise_floor if noise_power is None else noise_power
    if sigma2 <= 0.0:
        raise ValueError("noise power must be positive for an SNR")
    p_t = 10.0 ** ((params.transmit_power_dbm - 30.0) / 10.0)
    received = p_t * 10.0 ** (-path_loss_db(distance, params) / 10.0)
    return 10.0 * np.log10(received / sigma2)

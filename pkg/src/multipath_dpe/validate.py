"""Self-contained sanity checks runnable from the command line.

Each check exercises one structural identity of the pipeline with fresh
random draws and reports pass/fail; together they catch install-level
breakage (wrong BLAS, broken dependency versions) without running a
full Monte Carlo campaign.
"""

from __future__ import annotations

import numpy as np

from . import channel, estimators, geometry, spectral
from .feasibility import feasibility as pilot_sizing
from .harness import run_trial
from .scenario import load_preset


def _tiny_scenario():
    return load_preset(
        "ci_single_bs",
        overrides=["trials=1", "duration=0.5", "grid.half_extent=3", "name=validate_tiny"],
    )


def check_steering_reflection() -> tuple[bool, str]:
    """J conj(a(theta)) = exp(-j (M-1) pi sin(theta)) a(theta)."""
    rng = np.random.default_rng(7)
    cfg = geometry.ArrayConfig(16, 8, 5.9e9)
    worst = 0.0
    for theta in rng.uniform(-np.pi / 2, np.pi / 2, 1000):
        a = geometry.steering(theta, cfg.element_count, cfg)
        lhs = np.flip(a.conj())
        rhs = np.exp(-1j * (cfg.element_count - 1) * cfg.phase_pitch * np.sin(theta)) * a
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst < 1e-12, f"max residual {worst:.2e}"


def check_folding() -> tuple[bool, str]:
    """Folding is idempotent and preserves sin(bearing - heading)."""
    rng = np.random.default_rng(11)
    b = rng.uniform(0, 2 * np.pi, 10000)
    h = rng.uniform(0, 2 * np.pi, 10000)
    local = geometry.global_to_local(b, h)
    twice = geometry.global_to_local(local, 0.0)
    ok = np.max(np.abs(local - twice)) < 1e-12
    ok &= np.max(np.abs(np.sin(local) - np.sin(b - h))) < 1e-12
    ok &= np.all(np.abs(local) <= np.pi / 2)
    return bool(ok), "idempotence and sine preservation"


def check_pdp_anchors() -> tuple[bool, str]:
    """PDP is 1 at zero delay and e^-1 at one delay spread."""
    params = channel.ChannelParams()
    p0 = channel.power_delay_profile(0.0, params)
    p1 = channel.power_delay_profile(params.rms_delay_spread, params)
    a1 = channel.pdp_amplitude(params.rms_delay_spread, params)
    ok = p0 == 1.0 and abs(p1 - 0.36788) < 1e-4 and abs(a1 - 0.60653) < 1e-4
    return ok, f"P(0)={p0}, P(sigma)={p1:.5f}, a(sigma)={a1:.5f}"


def check_fb_and_capon() -> tuple[bool, str]:
    """FB persymmetry and Capon distortionless response."""
    rng = np.random.default_rng(13)
    cfg = geometry.ArrayConfig(12, 6, 5.9e9)
    y = rng.standard_normal((12, 24)) + 1j * rng.standard_normal((12, 24))
    fb = spectral.fb_covariance(spectral.forward_covariance(y, 6))
    j = np.eye(6)[::-1]
    persym = np.max(np.abs(j @ fb.matrix.conj() @ j - fb.matrix))
    w = spectral.capon_weights(fb, 0.3, cfg)
    gain = abs(w.conj() @ geometry.steering(0.3, 6, cfg) - 1.0)
    ok = persym < 1e-10 and gain < 1e-10
    return ok, f"persymmetry {persym:.2e}, distortionless error {gain:.2e}"


def check_projector() -> tuple[bool, str]:
    """Signature projector is Hermitian and idempotent."""
    rng = np.random.default_rng(17)
    x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    p = estimators.make_projector(x).matrix
    idem = np.linalg.norm(p @ p - p)
    herm = np.linalg.norm(p - p.conj().T)
    ok = idem < 1e-8 and herm < 1e-10
    return ok, f"idempotence {idem:.2e}, hermitian {herm:.2e}"


def check_compressed_score() -> tuple[bool, str]:
    """Score equals the residual drop of the profiled-gain least squares."""
    rng = np.random.default_rng(19)
    m, n = 8, 16
    x = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    ys = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    c = channel.QPSK[rng.integers(0, 4, n)]
    ybar = ys @ c.conj()
    cbar = float(np.sum(np.abs(c) ** 2))
    score = estimators.compressed_score(estimators.make_projector(x), ybar, cbar)
    gain = (x.conj() @ ybar) / (np.real(x.conj() @ x) * cbar)
    residual = sum(
        float(np.linalg.norm(ys[:, i] - gain * x * c[i]) ** 2) for i in range(n)
    )
    total = float(np.sum(np.abs(ys) ** 2))
    ok = abs((total - residual) - score) <= 1e-9 * max(score, 1.0)
    return ok, f"score {score:.6g} vs residual drop {total - residual:.6g}"


def check_snapshot_count() -> tuple[bool, str]:
    """Default pilot sizing yields 16 snapshots per observation."""
    report = pilot_sizing(channel.ChannelParams(), 0.5, 325e-6)
    return report.snapshot_count == 16, f"N = {report.snapshot_count}"


def check_batch_equals_recursive() -> tuple[bool, str]:
    """Replaying the observation stream reproduces the online scores."""
    scenario = _tiny_scenario()
    result = run_trial(scenario, 0)
    again = run_trial(scenario, 0)
    ok = all(
        np.array_equal(result.errors[label], again.errors[label]) for label in result.errors
    )
    return ok, "two seeded replays are bitwise identical"


ALL_CHECKS = [
    ("steering-reflection", check_steering_reflection),
    ("bearing-folding", check_folding),
    ("pdp-anchors", check_pdp_anchors),
    ("fb-capon", check_fb_and_capon),
    ("projector", check_projector),
    ("compressed-score", check_compressed_score),
    ("snapshot-count", check_snapshot_count),
    ("replay-determinism", check_batch_equals_recursive),
]


def run_checks(report=print) -> bool:
    """Run every check, emit one line each, return overall pass."""
    all_ok = True
    for name, fn in ALL_CHECKS:
        ok, detail = fn()
        all_ok &= ok
        report(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok

"""Command-line front end.

Subcommands
-----------
simulate     Run a Monte Carlo campaign and write RMSE/trace CSV files.
feasibility  Print pilot-burst sizing and stationarity horizons.
spectrum     Dump the MUSIC pseudospectrum of one synthetic observation.
validate     Run the built-in sanity checks.

Exit codes: 0 success, 1 module error (bad config, numerical failure),
2 usage error (unknown flag, missing scenario file).
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from .channel import ChannelParams
from .feasibility import feasibility as size_window
from .feasibility import interval_sweep, stationarity_time
from .geometry import ArrayConfig
from .harness import run_monte_carlo, run_trial, write_rmse_csv, write_trace_csv
from .scenario import ConfigError, resolve_scenario
from .spectral import (
    default_angle_grid,
    fb_covariance,
    forward_covariance,
    smooth_music,
    write_pseudospectrum_csv,
)
from .validate import run_checks

OUTPUT_ENV = "MULTIPATH_DPE_OUT"


def _add_scenario_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--scenario",
        required=True,
        help="scenario YAML file or shipped preset name",
    )
    sub.add_argument(
        "--out",
        default=None,
        help=f"output directory (default: ${OUTPUT_ENV} or current directory)",
    )
    sub.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config entry by dotted path, e.g. grid.spacing=0.5",
    )
    sub.add_argument("--seed", type=int, default=None, help="override master_seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multipath-dpe",
        description="Direct position estimation for an array receiver in multipath",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo campaign")
    _add_scenario_options(sim)
    sim.add_argument(
        "--no-traces",
        action="store_true",
        help="skip per-trial trace CSV files",
    )

    feas = sub.add_parser("feasibility", help="pilot-burst sizing report")
    feas.add_argument("--roll-off", type=float, default=0.5)
    feas.add_argument("--observation-time", type=float, default=325e-6)
    feas.add_argument("--coherence-time", type=float, default=None)
    feas.add_argument("--doppler-spread", type=float, default=512.0)
    feas.add_argument("--coherence-bandwidth", type=float, default=250e3)
    feas.add_argument("--out", default=None, help="also write a T(B) sweep CSV here")

    spec = sub.add_parser("spectrum", help="pseudospectrum of one synthetic observation")
    _add_scenario_options(spec)

    sub.add_parser("validate", help="run built-in sanity checks")
    return parser


def _output_dir(arg) -> str:
    out = arg or os.environ.get(OUTPUT_ENV) or "."
    os.makedirs(out, exist_ok=True)
    return out


def _load(args):
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"master_seed={args.seed}")
    return resolve_scenario(args.scenario, overrides)


def _cmd_simulate(args) -> int:
    scenario = _load(args)
    out = _output_dir(args.out)
    started = time.monotonic()
    series, results = run_monte_carlo(scenario)
    elapsed = time.monotonic() - started

    rmse_path = os.path.join(out, f"rmse_{scenario.name}.csv")
    write_rmse_csv(rmse_path, series, scenario)
    written = [rmse_path]
    if not args.no_traces:
        for result in results:
            path = os.path.join(out, f"trace_{scenario.name}_{result.trial_index}.csv")
            write_trace_csv(path, result, scenario)
            written.append(path)

    print(f"scenario {scenario.name}: {series.trials} trials, {len(series.times)} steps, {elapsed:.1f} s")
    for label in series.labels:
        rmse = series.rmse(label)
        print(f"  {label:12s} final RMSE {rmse[-1]:.3f} m, best {rmse.min():.3f} m")
    print(f"wrote {written[0]}" + (f" and {len(written) - 1} trace files" if len(written) > 1 else ""))
    return 0


def _cmd_feasibility(args) -> int:
    params = ChannelParams(
        doppler_spread=args.doppler_spread,
        coherence_bandwidth=args.coherence_bandwidth,
    )
    report = size_window(
        params, args.roll_off, args.observation_time, coherence_time=args.coherence_time
    )
    print(f"observation time   {report.observation_time * 1e6:.1f} us")
    print(f"coherence time     {report.coherence_time * 1e3:.3f} ms")
    print(
        f"bandwidth interval [{report.bandwidth_low / 1e3:.1f}, "
        f"{report.bandwidth_high / 1e3:.1f}] kHz"
    )
    print(f"chosen bandwidth   {report.bandwidth / 1e3:.1f} kHz (roll-off {report.roll_off})")
    print(f"sampling interval  {report.sampling_interval * 1e6:.2f} us")
    print(f"snapshots          {report.snapshot_count}")

    cfg_m64 = ArrayConfig(64, 32, params.carrier_frequency)
    for dist in (100.0, 20.0):
        t_sta = stationarity_time(dist, 50.0 / 3.6, 0.01, cfg_m64)
        print(f"stationarity time  {t_sta * 1e3:7.2f} ms at {dist:.0f} m, 50 km/h, 1% tolerance")

    if args.out:
        out = _output_dir(args.out)
        path = os.path.join(out, "feasibility_sweep.csv")
        bandwidths, intervals = interval_sweep(params, args.roll_off)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("bandwidth_hz,sampling_interval_s\n")
            for b, t in zip(bandwidths, intervals):
                fh.write(f"{b:.6g},{t:.9g}\n")
        print(f"wrote {path}")
    return 0


def _cmd_spectrum(args) -> int:
    scenario = _load(args)
    out = _output_dir(args.out)
    result_rng = np.random.default_rng([scenario.master_seed, 0])

    from .harness import build_mobility
    from .channel import generate_observation, sample_multipath
    from .geometry import los_bearing

    profile = build_mobility(scenario, result_rng)
    position = profile.true_positions[1]
    heading = profile.true_headings[1]
    bs = np.asarray(scenario.bs_positions[0], dtype=float)
    distance = float(np.hypot(*(bs - position)))
    realization = sample_multipath(
        result_rng,
        scenario.channel,
        scenario.multipath.d_max,
        distance,
        los_aoa=los_bearing(position, bs),
    )
    obs = generate_observation(
        result_rng,
        realization,
        heading,
        scenario.array,
        scenario.snapshots,
        scenario.channel.noise_floor,
    )
    grid = default_angle_grid(scenario.music_grid_points)
    cov = fb_covariance(forward_covariance(obs.samples, scenario.array.subarray_length))
    est = smooth_music(cov, scenario.multipath.d_max + 1, grid, scenario.array)

    path = os.path.join(out, f"spectrum_{scenario.name}.csv")
    write_pseudospectrum_csv(
        path,
        grid,
        est.pseudospectrum,
        header_lines=[
            f"config_hash={scenario.config_hash()}",
            f"master_seed={scenario.master_seed}",
            f"scenario={scenario.name}",
        ],
    )
    top = ", ".join(f"{np.rad2deg(a):.2f} deg" for a in est.angles[:5])
    print(f"top angles: {top}")
    print(f"wrote {path}")
    return 0


def _cmd_validate(_args) -> int:
    return 0 if run_checks() else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "feasibility": _cmd_feasibility,
        "spectrum": _cmd_spectrum,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.subcommand](args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError, np.linalg.LinAlgError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

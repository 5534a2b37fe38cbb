#!/usr/bin/env python3
"""Size the pilot burst against the channel coherence budget.

Two constraints fight each other: the burst must span at least one symbol
of bandwidth B inside the coherence bandwidth, and the whole observation
must finish before the channel decorrelates in time. This prints the
admissible bandwidth window, the snapshot count it buys, and how long the
array geometry itself stays effectively frozen at driving speed.
"""

import numpy as np

from multipath_dpe.channel import ChannelParams
from multipath_dpe.feasibility import feasibility, interval_sweep, stationarity_time
from multipath_dpe.geometry import ArrayConfig

params = ChannelParams()
print(f"doppler spread       {params.doppler_spread:.0f} Hz")
print(f"coherence bandwidth  {params.coherence_bandwidth / 1e3:.0f} kHz")
print()

for roll_off in (0.0, 0.25, 0.5, 1.0):
    rep = feasibility(params, roll_off, observation_time=325e-6)
    print(f"roll-off {roll_off:4.2f}: B in [{rep.bandwidth_low / 1e3:6.2f}, "
          f"{rep.bandwidth_high / 1e3:6.2f}] kHz, T = {rep.sampling_interval * 1e6:5.1f} us, "
          f"N = {rep.snapshot_count}")
print()

bandwidths, intervals = interval_sweep(params, 0.5, n_points=7)
print("symbol time along the admissible window (roll-off 0.5):")
for b, t in zip(bandwidths, intervals):
    print(f"  B = {b / 1e3:6.2f} kHz -> T = {t * 1e6:6.2f} us")
print()

cfg = ArrayConfig(64, 32, params.carrier_frequency)
speed = 50.0 / 3.6
print("time until the steering vector drifts by 1% at 50 km/h:")
for dist in (20.0, 50.0, 100.0, 200.0):
    t = stationarity_time(dist, speed, 0.01, cfg)
    bursts = int(t / 325e-6)
    print(f"  {dist:5.0f} m range: {t * 1e3:8.2f} ms  (~{bursts} pilot bursts)")

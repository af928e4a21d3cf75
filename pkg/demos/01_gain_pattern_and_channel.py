"""Gain pattern, softplus surrogate, and a single channel coefficient.

Run: python demos/01_gain_pattern_and_channel.py
"""
import numpy as np

from ra_cellfree import SystemParams, channel_coeff, directional_gain, draw_fading, make_layout, smoothed_gain

# %% cos^(2p) pattern versus angle off boresight
f = np.array([0.0, 0.0, 1.0])
angles = np.radians([0, 15, 30, 45, 60, 75, 89, 95])
dirs = np.column_stack([np.sin(angles), np.zeros_like(angles), np.cos(angles)])
for p in (0, 1, 2, 4):
    print(f"p={p}:", np.round(directional_gain(np.tile(f, (len(angles), 1)), dirs, p), 4))

# %% the smooth surrogate closes in on the exact pattern as m grows
for m in (5, 20, 200):
    print(f"m={m:4d}:", np.round(smoothed_gain(np.tile(f, (len(angles), 1)), dirs, 2, m), 4))

# %% one random deployment and one channel draw
params = SystemParams(num_aps=8, num_users=3)
layout = make_layout(params, seed=1)
fading = draw_fading(layout, params, seed=2)
q = layout.directions[0, 0]
print("distance AP0-user0 [m]:", layout.distances[0, 0].round(2))
print("|h| aligned :", abs(channel_coeff(layout, fading, q, 0, 0, params)))
print("|h| fixed +x:", abs(channel_coeff(layout, fading, np.array([1.0, 0, 0]), 0, 0, params)))

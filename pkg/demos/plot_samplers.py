"""
Generating synthetic scanpaths
==============================

Sampling fixations from saliency maps with the three built-in generators.
"""

import numpy as np

from gazebench import SaliencyMap
from gazebench.samplers import SamplerConfig, sample_center_baseline, sample_ior, sample_probabilistic

# Three maps of one 64x48 stimulus, one per cumulative viewing duration.
# Early viewing favours the left blob, later viewing spreads to the right.
h, w = 48, 64
gy, gx = np.mgrid[0:h, 0:w]


def blob(cx, cy, s):
    return np.exp(-((gx - cx) ** 2 + (gy - cy) ** 2) / (2 * s ** 2))


maps = [
    SaliencyMap(0.01 + blob(16, 24, 4), 0.5),
    SaliencyMap(0.01 + blob(16, 24, 5) + 0.6 * blob(48, 12, 5), 3.0),
    SaliencyMap(0.01 + blob(16, 24, 6) + blob(48, 12, 6) + 0.8 * blob(40, 40, 6), 5.0),
]

# Fixation k is drawn from the map covering k * mean_fix_dur_ms, with a
# Gaussian preference for landing near the previous fixation.
cfg = SamplerConfig(n_fixations=12, seed=4)
prob = sample_probabilistic(maps, cfg)
print("prob  ", np.round(prob.positions(), 3).tolist())

# Same seed, same path.
assert sample_probabilistic(maps, cfg) == prob
print("seed 5", np.round(sample_probabilistic(maps, cfg.with_(seed=5)).positions()[:3], 3).tolist())

# Greedy argmax with inhibition of return. The suppression of old
# fixations fades by ior_beta per step, so peaks can be revisited later.
ior = sample_ior(maps[-1], cfg)
print("ior   ", np.round(ior.positions(), 3).tolist())
print("distinct pixels:", len({(int(f.x * w), int(f.y * h)) for f in ior}))

# A stronger decay returns to the top peak sooner.
fast = sample_ior(maps[-1], cfg.with_(ior_beta=0.3))
print("beta .3", np.round(fast.positions()[:6], 3).tolist())

# Control condition: Gaussian scatter around the image centre.
print("center", np.round(sample_center_baseline((w, h), cfg).positions()[:4], 3).tolist())

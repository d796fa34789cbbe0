"""
Comparing two scanpaths
=======================

Four similarity scores between a recorded and a generated scanpath.
"""

import numpy as np

from gazebench import Scanpath
from gazebench.metrics import MetricParams, compare, cross_recurrence, determinism, dtw, laminarity

# Coordinates are normalized to the unit square, y grows downward.
human = Scanpath.from_points([(0.20, 0.20), (0.22, 0.21), (0.80, 0.20), (0.80, 0.78), (0.21, 0.80)], 250)
model = Scanpath.from_points([(0.21, 0.20), (0.80, 0.21), (0.79, 0.80), (0.50, 0.50)], 250, source="prob")

# DTW sums point distances along the cheapest monotone alignment, so it
# grows with path length. Eyenalysis averages nearest-neighbour distances.
for name, value in compare(human, model).items():
    print(f"{name:12s} {value:8.4f}")

# The recurrence matrix behind determinism and laminarity: both paths are
# cut to the shorter length and a cell is set when the two fixations lie
# within rho of each other.
rec = cross_recurrence(human, model, MetricParams(rho=0.04))
print(rec.cells.astype(int))

# A wider radius makes more cells recurrent.
print(cross_recurrence(human, model, MetricParams(rho=0.5)).cells.astype(int))

# Determinism looks for diagonal runs (same order in both paths), laminarity
# for horizontal or vertical runs (one path lingering near a spot).
eye = np.eye(3, dtype=bool)
print("identity:", determinism(eye), laminarity(eye))
column = np.zeros((3, 3), dtype=bool)
column[:, 0] = True
print("one column:", determinism(column), laminarity(column))

# DTW of a path with itself is zero and the score is symmetric.
assert dtw(human, human) == 0.0
assert dtw(human, model) == dtw(model, human)

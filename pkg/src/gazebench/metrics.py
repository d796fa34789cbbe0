"""Scanpath comparison metrics.

DTW and Eyenalysis work on the full fixation sequences. Determinism and
laminarity are cross-recurrence measures: both paths are cut to the shorter
length, a boolean matrix marks fixation pairs closer than a radius, and the
measures count recurrent cells that sit on diagonal (shared trajectory) or
horizontal/vertical (dwell) runs.

Only fixation positions enter any metric; durations are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Scanpath
from .errors import PreconditionError, RangeError

DEFAULT_RHO = 0.04
DEFAULT_L_MIN = 2


@dataclass(frozen=True)
class MetricParams:
    rho: float = DEFAULT_RHO
    l_min: int = DEFAULT_L_MIN

    def __post_init__(self):
        if not self.rho > 0:
            raise RangeError(f"recurrence radius must be positive, got {self.rho}")
        if int(self.l_min) != self.l_min or self.l_min < 2:
            raise RangeError(f"minimum line length must be an integer >= 2, got {self.l_min}")


@dataclass(frozen=True, eq=False)
class RecurrenceMatrix:
    cells: np.ndarray
    rho: float

    def __post_init__(self):
        cells = np.array(self.cells, dtype=bool)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise PreconditionError("recurrence matrix must be square")
        if not self.rho > 0:
            raise RangeError("recurrence radius must be positive")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def n(self) -> int:
        return self.cells.shape[0]


def _positions(path) -> np.ndarray:
    if isinstance(path, Scanpath):
        pos = path.positions()
    else:
        pos = np.asarray(path, dtype=float).reshape(-1, 2)
    if pos.shape[0] == 0:
        raise PreconditionError("scanpath must contain at least one fixation")
    return pos


def distance_matrix(a, b) -> np.ndarray:
    """Euclidean distances between every fixation of ``a`` and of ``b``."""
    pa, pb = _positions(a), _positions(b)
    diff = pa[:, None, :] - pb[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def dtw(a, b) -> float:
    """Unnormalized dynamic time warping distance between two scanpaths.

    Accepts Scanpath objects or (n, 2) arrays of normalized positions.
    """
    cost = distance_matrix(a, b)
    n, m = cost.shape
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, n + 1):
        row_cost = cost[i - 1]
        prev = acc[i - 1]
        cur = acc[i]
        for j in range(1, m + 1):
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = row_cost[j - 1] + best
    return float(acc[n, m])


def eyenalysis(a, b) -> float:
    """Mean nearest-neighbour distance under double mapping."""
    dist = distance_matrix(a, b)
    total = dist.min(axis=1).sum() + dist.min(axis=0).sum()
    return float(total / (dist.shape[0] + dist.shape[1]))


def cross_recurrence(a, b, params: MetricParams = MetricParams()) -> RecurrenceMatrix:
    pa, pb = _positions(a), _positions(b)
    n = min(len(pa), len(pb))
    dist = distance_matrix(pa[:n], pb[:n])
    return RecurrenceMatrix(dist <= params.rho, params.rho)


def _cells(m) -> np.ndarray:
    return m.cells if isinstance(m, RecurrenceMatrix) else np.asarray(m, dtype=bool)


def _mark_runs(line: np.ndarray, l_min: int) -> np.ndarray:
    """Boolean mask of entries of ``line`` inside a True run of length >= l_min."""
    padded = np.concatenate(([False], line, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    starts, stops = edges[::2], edges[1::2]
    out = np.zeros(len(line), dtype=bool)
    for s, e in zip(starts, stops):
        if e - s >= l_min:
            out[s:e] = True
    return out


def _check_l_min(l_min) -> int:
    if int(l_min) != l_min or l_min < 1:
        raise RangeError(f"minimum line length must be a positive integer, got {l_min}")
    return int(l_min)


def diagonal_line_mask(m, l_min: int = DEFAULT_L_MIN) -> np.ndarray:
    cells = _cells(m)
    l_min = _check_l_min(l_min)
    n_rows, n_cols = cells.shape
    mask = np.zeros_like(cells)
    for offset in range(-(n_rows - 1), n_cols):
        line = np.diagonal(cells, offset)
        if len(line) < l_min:
            continue
        hit = _mark_runs(line, l_min)
        if offset >= 0:
            rows = np.arange(len(line))
            cols = rows + offset
        else:
            cols = np.arange(len(line))
            rows = cols - offset
        mask[rows[hit], cols[hit]] = True
    return mask


def laminar_line_mask(m, l_min: int = DEFAULT_L_MIN) -> np.ndarray:
    cells = _cells(m)
    l_min = _check_l_min(l_min)
    mask = np.zeros_like(cells)
    for i in range(cells.shape[0]):
        mask[i, :] |= _mark_runs(cells[i, :], l_min)
    for j in range(cells.shape[1]):
        mask[:, j] |= _mark_runs(cells[:, j], l_min)
    return mask


def _diagonal_capacity(shape, l_min: int) -> np.ndarray:
    """Cells whose diagonal is long enough to hold a run of length l_min."""
    n_rows, n_cols = shape
    i, j = np.indices(shape)
    length = np.minimum(n_rows - i + np.minimum(i, j), n_cols - j + np.minimum(i, j))
    return length >= l_min


def _laminar_capacity(shape, l_min: int) -> np.ndarray:
    n_rows, n_cols = shape
    return np.full(shape, n_rows >= l_min or n_cols >= l_min)


def _percentage(cells: np.ndarray, on_line: np.ndarray, capacity: np.ndarray) -> float:
    eligible = int((cells & capacity).sum())
    if eligible == 0:
        return 0.0
    return 100.0 * int(on_line.sum()) / eligible


def determinism(m, l_min: int = DEFAULT_L_MIN) -> float:
    """Percentage of recurrent cells lying on a diagonal run of length >= l_min.

    Diagonals run with both indices increasing. Recurrent cells on a
    diagonal too short to ever hold such a run (the far corners) are left
    out of the denominator, so a fully recurrent matrix scores 100. Returns
    0 when no recurrent cell is eligible.
    """
    cells = _cells(m)
    l_min = _check_l_min(l_min)
    return _percentage(cells, diagonal_line_mask(cells, l_min),
                       _diagonal_capacity(cells.shape, l_min))


def laminarity(m, l_min: int = DEFAULT_L_MIN) -> float:
    """Percentage of recurrent cells on a horizontal or vertical run of length >= l_min.

    A cell on both a horizontal and a vertical run counts once.
    """
    cells = _cells(m)
    l_min = _check_l_min(l_min)
    return _percentage(cells, laminar_line_mask(cells, l_min),
                       _laminar_capacity(cells.shape, l_min))


def compare(a, b, params: MetricParams = MetricParams()) -> dict:
    """All four metrics for one pair, keyed by metric name."""
    rec = cross_recurrence(a, b, params)
    return {
        "dtw": dtw(a, b),
        "eyenalysis": eyenalysis(a, b),
        "determinism": determinism(rec, params.l_min),
        "laminarity": laminarity(rec, params.l_min),
    }

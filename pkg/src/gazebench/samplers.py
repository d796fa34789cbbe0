"""Synthetic scanpath generators driven by precomputed maps.

Three generators share one configuration object:

* ``sample_probabilistic`` draws each fixation from a multi-duration
  saliency map, reweighted by a Gaussian locality mask around the previous
  fixation.
* ``sample_ior`` greedily takes the argmax of a density map and suppresses
  the chosen location with a Gaussian whose strength fades geometrically,
  so visited places become eligible again later.
* ``sample_center_baseline`` scatters fixations around the image center and
  serves as a control.

Every generator is a pure function of its inputs and ``SamplerConfig.seed``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Optional, Sequence

import numpy as np

from .core import Fixation, SaliencyMap, Scanpath
from .errors import DegenerateMapError, PreconditionError, RangeError, SuppressionSaturationError

CENTER_SIGMA = 0.15


@dataclass(frozen=True)
class SamplerConfig:
    n_fixations: int = 12
    seed: int = 0
    mean_fix_dur_ms: float = 250.0
    gaussian_weight: float = 0.5
    sigma_loc: float = 0.2
    ior_lambda: float = 1.0
    ior_beta: float = 0.9
    ior_sigma: float = 0.1

    def __post_init__(self):
        if int(self.n_fixations) != self.n_fixations or self.n_fixations < 1:
            raise RangeError(f"n_fixations must be a positive integer, got {self.n_fixations}")
        if not 0 <= int(self.seed) < 2**64:
            raise RangeError("seed must fit in 64 unsigned bits")
        if not self.mean_fix_dur_ms > 0:
            raise RangeError("mean_fix_dur_ms must be positive")
        if not 0.0 <= self.gaussian_weight <= 1.0:
            raise RangeError("gaussian_weight must lie in [0, 1]")
        if not self.sigma_loc > 0 or not self.ior_sigma > 0:
            raise RangeError("Gaussian spreads must be positive")
        if not 0.0 < self.ior_lambda <= 1.0:
            raise RangeError("ior_lambda must lie in (0, 1]")
        if not 0.0 < self.ior_beta < 1.0:
            raise RangeError("ior_beta must lie in (0, 1)")

    def with_(self, **changes) -> "SamplerConfig":
        return replace(self, **changes)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "SamplerConfig":
        """Build from a dict, ignoring keys that are not config fields."""
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, value in mapping.items():
            key = key.replace("-", "_")
            if key not in types:
                continue
            kwargs[key] = int(value) if key in ("n_fixations", "seed") else float(value)
        return cls(**kwargs)


def gaussian_bump(gx: np.ndarray, gy: np.ndarray, center: tuple[float, float], sigma: float) -> np.ndarray:
    """Unnormalized isotropic Gaussian, 1 at ``center``."""
    d2 = (gx - center[0]) ** 2 + (gy - center[1]) ** 2
    return np.exp(-d2 / (2.0 * sigma * sigma))


def select_duration_map(maps: Sequence[SaliencyMap], elapsed_s: float) -> SaliencyMap:
    """Map with the smallest duration bin covering ``elapsed_s``; the last map past every bin."""
    for m in maps:
        if m.duration_bin_s is None or m.duration_bin_s >= elapsed_s:
            return m
    return maps[-1]


def _draw(rng: np.random.Generator, weights: np.ndarray) -> int:
    cdf = np.cumsum(weights.ravel())
    total = cdf[-1]
    if not total > 0:
        raise DegenerateMapError("sampling distribution has no positive mass")
    return int(np.searchsorted(cdf, rng.random() * total, side="right"))


def _fixation(k: int, pos: tuple[float, float], cfg: SamplerConfig) -> Fixation:
    return Fixation(pos[0], pos[1], cfg.mean_fix_dur_ms, k * cfg.mean_fix_dur_ms)


def sample_probabilistic(maps: Sequence[SaliencyMap], cfg: SamplerConfig = SamplerConfig(),
                         stimulus_id: str = "", source: str = "prob") -> Scanpath:
    """Sample a scanpath from multi-duration saliency maps.

    Fixation k happens ``k * mean_fix_dur_ms`` after onset and is drawn from
    the map whose duration bin first covers that time. From the second
    fixation on, the map is multiplied by ``(1 - w) + w * G``, with G a
    Gaussian of spread ``sigma_loc`` centred on the previous fixation.
    """
    if isinstance(maps, SaliencyMap):
        maps = [maps]
    maps = list(maps)
    if not maps:
        raise PreconditionError("at least one saliency map is required")
    bins = [m.duration_bin_s for m in maps]
    if len(maps) > 1:
        if any(b is None for b in bins) or any(b2 <= b1 for b1, b2 in zip(bins, bins[1:])):
            raise PreconditionError(f"duration bins must be strictly increasing, got {bins}")

    rng = np.random.default_rng(cfg.seed)
    w = cfg.gaussian_weight
    fixations = []
    prev = None
    for k in range(cfg.n_fixations):
        smap = select_duration_map(maps, k * cfg.mean_fix_dur_ms / 1000.0)
        weights = smap.values
        if prev is not None and w > 0:
            gx, gy = smap.pixel_centers()
            weights = weights * ((1.0 - w) + w * gaussian_bump(gx, gy, prev, cfg.sigma_loc))
        try:
            idx = _draw(rng, weights)
        except DegenerateMapError:
            raise DegenerateMapError(
                f"fixation {k}: selected map (bin {smap.duration_bin_s}) has no mass "
                "after locality weighting") from None
        prev = smap.pixel_center(idx)
        fixations.append(_fixation(k, prev, cfg))
    return Scanpath(tuple(fixations), stimulus_id, source)


def ior_suppression(smap: SaliencyMap, visited: Sequence[tuple[float, float]], cfg: SamplerConfig) -> np.ndarray:
    """Multiplicative suppression field after the fixations in ``visited``.

    The most recent fixation is suppressed with strength ``ior_lambda``;
    each older one with that strength times ``ior_beta`` per elapsed step.
    """
    gx, gy = smap.pixel_centers()
    field = np.ones_like(gx)
    k = len(visited)
    for j, f in enumerate(visited):
        strength = cfg.ior_lambda * cfg.ior_beta ** (k - 1 - j)
        field *= 1.0 - strength * gaussian_bump(gx, gy, f, cfg.ior_sigma)
    return field


def sample_ior(smap: SaliencyMap, cfg: SamplerConfig = SamplerConfig(),
               stimulus_id: str = "", source: str = "ior") -> Scanpath:
    """Greedy argmax selection with decaying inhibition of return.

    Deterministic: ties go to the lowest row-major index and the seed is
    not used.
    """
    visited: list[tuple[float, float]] = []
    fixations = []
    for k in range(cfg.n_fixations):
        effective = smap.values * ior_suppression(smap, visited, cfg)
        idx = int(np.argmax(effective))
        if not effective.flat[idx] > 0:
            raise SuppressionSaturationError(
                f"inhibition of return suppressed the whole map at fixation {k}; "
                "lower ior_lambda")
        pos = smap.pixel_center(idx)
        visited.append(pos)
        fixations.append(_fixation(k, pos, cfg))
    return Scanpath(tuple(fixations), stimulus_id, source)


def sample_center_baseline(dims: Optional[tuple[int, int]] = None, cfg: SamplerConfig = SamplerConfig(),
                           stimulus_id: str = "", source: str = "center") -> Scanpath:
    """Isotropic Gaussian draws around (0.5, 0.5), clamped to the unit square."""
    if dims is not None and not (dims[0] > 0 and dims[1] > 0):
        raise RangeError(f"dimensions must be positive, got {dims!r}")
    rng = np.random.default_rng(cfg.seed)
    pts = np.clip(rng.normal(0.5, CENTER_SIGMA, size=(cfg.n_fixations, 2)), 0.0, 1.0)
    fixations = tuple(_fixation(k, (float(x), float(y)), cfg) for k, (x, y) in enumerate(pts))
    return Scanpath(fixations, stimulus_id, source)


SAMPLER_MODES = ("prob", "ior", "center")


def run_sampler(mode: str, maps: Sequence[SaliencyMap], cfg: SamplerConfig,
                stimulus_id: str = "", source: Optional[str] = None) -> Scanpath:
    """Dispatch on a mode name. ``ior`` uses the last (longest-duration) map."""
    source = source or mode
    if mode == "prob":
        return sample_probabilistic(maps, cfg, stimulus_id, source)
    if mode == "ior":
        return sample_ior(list(maps)[-1], cfg, stimulus_id, source)
    if mode == "center":
        dims = list(maps)[-1].dims if maps else None
        return sample_center_baseline(dims, cfg, stimulus_id, source)
    raise PreconditionError(f"unknown sampler mode {mode!r}; expected one of {SAMPLER_MODES}")

import math

import numpy as np
import pytest

from gazebench.core import SaliencyMap, dump_scanpath
from gazebench.errors import DegenerateMapError, PreconditionError, RangeError, SuppressionSaturationError
from gazebench.samplers import (
    SamplerConfig,
    ior_suppression,
    run_sampler,
    sample_center_baseline,
    sample_ior,
    sample_probabilistic,
    select_duration_map,
)


def delta_map(h, w, row, col, bin_s=None):
    v = np.zeros((h, w))
    v[row, col] = 1.0
    return SaliencyMap(v, bin_s)


def peaks_map(h, w, cells):
    v = np.zeros((h, w))
    for r, c in cells:
        v[r, c] = 1.0
    return SaliencyMap(v)


class TestConfig:
    def test_defaults(self):
        cfg = SamplerConfig()
        assert (cfg.n_fixations, cfg.mean_fix_dur_ms, cfg.gaussian_weight) == (12, 250.0, 0.5)
        assert (cfg.ior_lambda, cfg.ior_beta, cfg.ior_sigma, cfg.sigma_loc) == (1.0, 0.9, 0.1, 0.2)

    @pytest.mark.parametrize("bad", [
        {"n_fixations": 0}, {"gaussian_weight": 1.5}, {"ior_lambda": 0.0},
        {"ior_beta": 1.0}, {"sigma_loc": 0.0}, {"seed": -1},
    ])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(RangeError):
            SamplerConfig(**bad)

    def test_from_mapping(self):
        cfg = SamplerConfig.from_mapping({"n-fixations": "7", "ior_beta": "0.5", "other": 1})
        assert cfg.n_fixations == 7 and cfg.ior_beta == 0.5


class TestDurationSelection:
    maps = [delta_map(2, 2, 0, 0, 0.5), delta_map(2, 2, 0, 1, 3.0), delta_map(2, 2, 1, 1, 5.0)]

    @pytest.mark.parametrize("elapsed, expected", [
        (0.0, 0.5), (0.5, 0.5), (0.75, 3.0), (3.0, 3.0), (4.9, 5.0), (12.0, 5.0),
    ])
    def test_smallest_covering_bin(self, elapsed, expected):
        assert select_duration_map(self.maps, elapsed).duration_bin_s == expected

    def test_fixations_follow_bins(self):
        # 250 ms spacing: k=0..2 -> 0.5 s map, k=3..12 -> 3 s map, after -> 5 s map
        path = sample_probabilistic(self.maps, SamplerConfig(n_fixations=22, gaussian_weight=0.0))
        cells = [(f.x, f.y) for f in path]
        assert cells[:3] == [(0.25, 0.25)] * 3
        assert cells[3:13] == [(0.75, 0.25)] * 10
        assert cells[13:] == [(0.75, 0.75)] * 9


class TestProbabilistic:
    def test_delta_map(self):
        m = delta_map(4, 5, 2, 3)
        path = sample_probabilistic([m], SamplerConfig(n_fixations=5, seed=123))
        assert [(f.x, f.y) for f in path] == [(3.5 / 5, 2.5 / 4)] * 5

    def test_reproducible(self):
        rng = np.random.default_rng(0)
        maps = [SaliencyMap(rng.random((8, 8)), b) for b in (0.5, 3, 5)]
        cfg = SamplerConfig(seed=99)
        a, b = sample_probabilistic(maps, cfg), sample_probabilistic(maps, cfg)
        assert dump_scanpath(a) == dump_scanpath(b)
        assert dump_scanpath(a) != dump_scanpath(sample_probabilistic(maps, cfg.with_(seed=100)))

    def test_two_pixel_uniform_frequencies(self):
        n = 10000
        m = SaliencyMap(np.ones((1, 2)))
        path = sample_probabilistic([m], SamplerConfig(n_fixations=n, gaussian_weight=0.0, seed=7))
        left = sum(f.x < 0.5 for f in path) / n
        # binomial: sigma = sqrt(0.25 / n) = 0.005, 3 sigma = 0.015
        assert abs(left - 0.5) <= 3 * math.sqrt(0.25 / n)

    def test_timing_and_bounds(self):
        m = SaliencyMap(np.random.default_rng(1).random((6, 9)))
        path = sample_probabilistic([m], SamplerConfig(n_fixations=12, mean_fix_dur_ms=300))
        onsets = [f.onset_ms for f in path]
        assert onsets == [300.0 * k for k in range(12)]
        assert all(f.duration_ms == 300.0 for f in path)
        assert all(0 <= f.x <= 1 and 0 <= f.y <= 1 for f in path)

    def test_locality_shortens_steps(self):
        # one-sided Monte Carlo comparison on a uniform map
        m = SaliencyMap(np.ones((16, 16)))
        def mean_step(cfg):
            steps = []
            for seed in range(10000):
                p = sample_probabilistic([m], cfg.with_(seed=seed))
                steps.append(math.dist((p[0].x, p[0].y), (p[1].x, p[1].y)))
            return np.mean(steps)
        local = mean_step(SamplerConfig(n_fixations=2, gaussian_weight=1.0, sigma_loc=0.05))
        free = mean_step(SamplerConfig(n_fixations=2, gaussian_weight=0.0))
        assert local < free

    def test_degenerate_after_weighting(self):
        # the next bin's only mass sits where the locality mask underflows to 0
        maps = [delta_map(64, 64, 0, 0, 0.5), delta_map(64, 64, 63, 63, 3.0)]
        cfg = SamplerConfig(n_fixations=4, gaussian_weight=1.0, sigma_loc=0.01, seed=3)
        with pytest.raises(DegenerateMapError):
            sample_probabilistic(maps, cfg)

    def test_bins_must_increase(self):
        maps = [delta_map(2, 2, 0, 0, 3.0), delta_map(2, 2, 0, 0, 0.5)]
        with pytest.raises(PreconditionError):
            sample_probabilistic(maps)


class TestIOR:
    def test_first_is_argmax(self):
        v = np.random.default_rng(5).random((10, 12))
        v[7, 3] = 2.0
        path = sample_ior(SaliencyMap(v), SamplerConfig(n_fixations=1))
        assert (path[0].x, path[0].y) == (3.5 / 12, 7.5 / 10)

    def test_two_equal_distant_peaks(self):
        # peaks 0.8 apart with sigma 0.1: the suppression at the other peak is
        # exp(-0.64 / 0.02) ~ 1e-14, so it stays the argmax of what remains
        m = peaks_map(50, 50, [(45, 5), (5, 45)])
        path = sample_ior(m, SamplerConfig(n_fixations=2))
        assert (path[0].x, path[0].y) == (45.5 / 50, 5.5 / 50)
        assert (path[1].x, path[1].y) == (5.5 / 50, 45.5 / 50)

    def test_tie_break_lowest_row_major(self):
        m = SaliencyMap(np.ones((3, 3)))
        path = sample_ior(m, SamplerConfig(n_fixations=1))
        assert (path[0].x, path[0].y) == (0.5 / 3, 0.5 / 3)

    def test_deterministic_and_seed_free(self):
        m = SaliencyMap(np.random.default_rng(2).random((16, 16)))
        a = sample_ior(m, SamplerConfig(seed=1))
        b = sample_ior(m, SamplerConfig(seed=2))
        assert dump_scanpath(a) == dump_scanpath(b)

    def test_suppression_field_values(self):
        m = SaliencyMap(np.ones((1, 2)))
        cfg = SamplerConfig()
        field = ior_suppression(m, [(0.25, 0.5), (0.75, 0.5)], cfg)
        g = math.exp(-0.25 / (2 * 0.01))
        # left pixel: older visit (strength 0.9) at distance 0, newer (1.0) at 0.5
        assert field[0, 0] == pytest.approx((1 - 0.9) * (1 - g))
        assert field[0, 1] == pytest.approx((1 - 0.9 * g) * 0.0)

    def test_no_repeat_within_two_steps(self):
        m = peaks_map(40, 40, [(5, 5), (5, 34), (34, 20)])
        path = sample_ior(m, SamplerConfig(n_fixations=20))
        cells = [(f.x, f.y) for f in path]
        for k in range(1, len(cells)):
            assert cells[k] != cells[k - 1]
            if k >= 2:
                assert cells[k] != cells[k - 2]
        # recovery: every peak is revisited
        assert len(set(cells)) == 3 and len(cells) == 20

    def test_saturation(self):
        with pytest.raises(SuppressionSaturationError):
            sample_ior(delta_map(3, 3, 1, 1), SamplerConfig(n_fixations=2))

    def test_uniform_coverage(self):
        path = sample_ior(SaliencyMap(np.ones((32, 32))), SamplerConfig(n_fixations=12))
        assert len({(f.x, f.y) for f in path}) >= 8


class TestCenterBaseline:
    def test_single_in_bounds(self):
        path = sample_center_baseline((100, 80), SamplerConfig(n_fixations=1, seed=11))
        assert len(path) == 1
        assert 0 <= path[0].x <= 1 and 0 <= path[0].y <= 1

    def test_reproducible(self):
        cfg = SamplerConfig(seed=4)
        assert dump_scanpath(sample_center_baseline(None, cfg)) == dump_scanpath(sample_center_baseline(None, cfg))

    def test_monte_carlo_mean(self):
        path = sample_center_baseline(None, SamplerConfig(n_fixations=10000, seed=8))
        pos = path.positions()
        # clamp is symmetric about 0.5, so the clamped mean stays at the center
        assert np.all(np.abs(pos.mean(axis=0) - 0.5) <= 0.01)
        assert pos.min() >= 0 and pos.max() <= 1

    def test_bad_dims(self):
        with pytest.raises(RangeError):
            sample_center_baseline((0, 10))


def test_run_sampler_dispatch():
    m = delta_map(4, 4, 1, 2)
    cfg = SamplerConfig(n_fixations=1)
    for mode in ("prob", "ior"):
        p = run_sampler(mode, [m], cfg, "s1")
        assert (p[0].x, p[0].y, p.source, p.stimulus_id) == (2.5 / 4, 1.5 / 4, mode, "s1")
    assert run_sampler("center", [m], cfg).source == "center"
    with pytest.raises(PreconditionError):
        run_sampler("bogus", [m], cfg)

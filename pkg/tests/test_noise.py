"""Noise oracles: reported parameters, moments, MGF bounds, determinism."""

import math

import numpy as np
import pytest
from scipy import stats

from banco.noise import (
    BoundedUniform,
    GaussianIso,
    LaplaceMechanism,
    NoneNoise,
    make_oracle,
    noise_spec,
    sample_noise,
    substream,
)


class TestSpecs:
    def test_none_all_zero(self):
        s = noise_spec(NoneNoise(3))
        assert (s.sigma2, s.sigma2_1d, s.b) == (0.0, 0.0, 0.0)

    def test_gaussian_iso(self):
        s = noise_spec(GaussianIso(s2=1.0, d=4))
        assert (s.sigma2, s.sigma2_1d, s.b) == (4.0, 1.0, 0.0)

    def test_laplace_mechanism(self):
        s = noise_spec(LaplaceMechanism(epsilon=2.0, d=3))
        assert s.sigma2 == pytest.approx(12.0)
        assert s.sigma2_1d == pytest.approx(40.5)
        assert s.b == pytest.approx(2.0)

    def test_bounded_uniform(self):
        s = noise_spec(BoundedUniform(r=3.0, d=2))
        assert s.sigma2 == pytest.approx(6.0)
        assert s.sigma2_1d == pytest.approx(3.0)
        assert s.b == 0.0


class TestSampling:
    def test_none_returns_zeros(self):
        oracle = NoneNoise(5)
        for _ in range(3):
            np.testing.assert_array_equal(sample_noise(oracle), np.zeros(5))

    def test_determinism_same_seed(self):
        a = GaussianIso(1.0, 3, substream(11, 0))
        b = GaussianIso(1.0, 3, substream(11, 0))
        np.testing.assert_array_equal(a.sample_block(10), b.sample_block(10))

    def test_substreams_differ(self):
        a = GaussianIso(1.0, 3, substream(11, 0)).sample_block(4)
        b = GaussianIso(1.0, 3, substream(11, 1)).sample_block(4)
        assert not np.allclose(a, b)

    def test_zero_mean(self):
        for oracle in (
            GaussianIso(1.0, 4, substream(1)),
            LaplaceMechanism(1.0, 4, substream(2)),
            BoundedUniform(2.0, 4, substream(3)),
        ):
            xs = oracle.sample_block(200000)
            se = xs.std(axis=0, ddof=1) / math.sqrt(len(xs))
            assert np.all(np.abs(xs.mean(axis=0)) <= 4.0 * se)

    def test_factory(self):
        assert isinstance(make_oracle("gaussian", 2, None, s2=1.0), GaussianIso)
        assert isinstance(make_oracle("laplace", 2, None, epsilon=1.0), LaplaceMechanism)
        with pytest.raises(ValueError):
            make_oracle("cauchy", 2, None)


class TestLaplaceMechanism:
    def test_1d_marginal_second_moment(self):
        # two-sided exponential in 1-d: E xi^2 = 8/eps^2
        eps = 1.5
        xs = LaplaceMechanism(eps, 1, substream(42)).sample_block(400000)[:, 0]
        m2 = np.mean(xs**2)
        se = np.std(xs**2, ddof=1) / math.sqrt(len(xs))
        assert abs(m2 - 8.0 / eps**2) <= 3.0 * se

    def test_norm_second_moment_d5(self):
        # E||xi||^2 equals the radial law's second moment d(d+1)/(eps/2)^2
        eps, d = 1.0, 5
        xs = LaplaceMechanism(eps, d, substream(43)).sample_block(300000)
        sq = np.sum(xs**2, axis=1)
        se = np.std(sq, ddof=1) / math.sqrt(len(sq))
        assert abs(np.mean(sq) - 4.0 * d * (d + 1) / eps**2) <= 3.0 * se

    def test_radial_law_is_erlang(self):
        eps, d = 2.0, 4
        xs = LaplaceMechanism(eps, d, substream(44)).sample_block(100000)
        radii = np.linalg.norm(xs, axis=1)
        res = stats.kstest(radii, stats.gamma(a=d, scale=2.0 / eps).cdf)
        assert res.pvalue > 1e-3

    def test_direction_uniform_on_sphere(self):
        xs = LaplaceMechanism(1.0, 3, substream(45)).sample_block(100000)
        dirs = xs / np.linalg.norm(xs, axis=1, keepdims=True)
        # each coordinate of a uniform sphere direction has mean 0, var 1/d
        assert np.all(np.abs(dirs.mean(axis=0)) < 0.01)
        np.testing.assert_allclose(dirs.var(axis=0), 1.0 / 3.0, atol=0.01)


class TestMgfBounds:
    """Empirical directional MGF stays below exp(beta^2 sigma_1d^2 / 2)."""

    def check(self, oracle, betas, n=200000, seed=7):
        spec = oracle.spec()
        xs = oracle.sample_block(n)
        rng = np.random.default_rng(seed)
        dirs = [np.eye(oracle.d)[0]]
        v = rng.normal(size=oracle.d)
        dirs.append(v / np.linalg.norm(v))
        for a in dirs:
            proj = xs @ a
            for beta in betas:
                vals = np.exp(beta * proj)
                mean = vals.mean()
                se = vals.std(ddof=1) / math.sqrt(n)
                bound = math.exp(beta**2 * spec.sigma2_1d / 2.0)
                assert mean - 5.0 * se <= bound, (beta, mean, bound)

    def test_gaussian(self):
        self.check(GaussianIso(1.0, 4, substream(50)), np.linspace(-2, 2, 7))

    def test_bounded_uniform(self):
        self.check(BoundedUniform(1.5, 3, substream(51)), np.linspace(-2, 2, 7))

    def test_laplace_within_mgf_window(self):
        eps = 2.0
        oracle = LaplaceMechanism(eps, 2, substream(52))
        betas = np.linspace(-eps / 4.0, eps / 4.0, 7)
        self.check(oracle, betas[betas != 0])

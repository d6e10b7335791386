"""Environments: gradient conventions, the randomized hard instance, averaging."""

import math

import numpy as np
import pytest

from banco.environments import (
    Absolute1D,
    RampHardInstance,
    LinearFixed,
    PrivateConvex,
    env_query,
    lipschitz_audit,
    online_to_batch,
    sphere_mean_abs_coord,
)
from banco.errors import DomainError, EmptySequence
from banco.noise import GaussianIso, substream


def make_hard(q=2.0, oracle="A", d=6, sigma=2.0, delta=None, seed=0):
    rng = substream(seed)
    alpha = np.where(rng.random(d) < 0.5, -1.0, 1.0)
    delta = 1.0 / (2.0 * sigma) if delta is None else delta
    return RampHardInstance(alpha=alpha, delta=delta, r=1.0, q=q, sigma=sigma, oracle=oracle, rng=rng)


class TestAbsolute1D:
    def test_gain_points_to_minimizer(self):
        env = Absolute1D(5.0)
        s = env_query(env, np.array([0.0]), 0)
        assert s.g_true[0] == 1.0
        assert s.loss_true == 5.0

    def test_gain_flips_past_minimizer(self):
        env = Absolute1D(1.0)
        s = env_query(env, np.array([4.0]), 0)
        assert s.g_true[0] == -1.0 and s.loss_true == 3.0

    def test_comparator_loss(self):
        env = Absolute1D(2.0)
        env.query(np.array([0.0]), 0)
        assert env.comparator_loss(np.array([3.5])) == 1.5

    def test_noise_composes(self):
        env = Absolute1D(1.0, GaussianIso(1.0, 1, substream(1)))
        s = env.query(np.array([0.0]), 0)
        np.testing.assert_allclose(s.g_hat, s.g_true + s.xi)

    def test_rejects_non_finite_query(self):
        with pytest.raises(DomainError):
            env_query(Absolute1D(1.0), np.array([math.inf]), 0)


class TestLinearFixed:
    def test_loss_and_gradient(self):
        env = LinearFixed([[2.0, 0.0]])
        s = env.query(np.array([1.0, 3.0]), 0)
        np.testing.assert_array_equal(s.g_true, [2.0, 0.0])
        assert s.loss_true == -2.0

    def test_unit_sequence_audit(self):
        env = LinearFixed([[1.0, 0.0], [0.0, -1.0]])
        env.q = 2.0
        assert lipschitz_audit(env, [np.zeros(2)]) == 1.0


class TestHardInstance:
    def test_convexity_constraint_enforced(self):
        with pytest.raises(ValueError):
            make_hard(delta=0.6, sigma=2.0)

    def test_alpha_must_be_signs(self):
        with pytest.raises(ValueError):
            RampHardInstance(np.array([0.5, 1.0]), 0.1, 1.0, 2.0, 2.0, "A")

    def test_oracle_a_single_active_coordinate(self):
        env = make_hard(oracle="A")
        rng = substream(10)
        for _ in range(30):
            x = rng.normal(size=env.d) * 2
            s = env.query(x, 0)
            active = np.nonzero(s.g_hat)[0]
            assert len(active) == 1
            # realized entry is c times a ramp slope in {-1, +-sigma, 1}
            val = abs(s.g_hat[active[0]]) / env.c
            assert min(abs(val - 1.0), abs(val - env.sigma)) <= 1e-12

    def test_oracle_constants(self):
        assert make_hard(oracle="A", q=1.5).c == 0.5
        env_b = make_hard(oracle="B", q=4.0, d=6)
        assert env_b.c == pytest.approx(0.5 * 6 ** (1 - 0.25))

    def test_unbiased_oracle_a(self):
        env = make_hard(oracle="A", d=4, seed=3)
        x = np.array([0.3, -2.0, 0.0, 1.4])
        n = 60000
        draws = np.stack([env.query(x, t).g_hat for t in range(n)])
        mean = draws.mean(axis=0)
        se = draws.std(axis=0, ddof=1) / math.sqrt(n)
        target = -env.gradient(x)
        assert np.all(np.abs(mean - target) <= 3.0 * se + 1e-12)

    def test_unbiased_oracle_b(self):
        env = make_hard(oracle="B", q=2.0, d=4, seed=4)
        x = np.array([0.5, -0.5, 2.0, -2.0])
        n = 60000
        draws = np.stack([env.query(x, t).g_hat for t in range(n)])
        mean = draws.mean(axis=0)
        se = draws.std(axis=0, ddof=1) / math.sqrt(n)
        target = -env.gradient(x)
        assert np.all(np.abs(mean - target) <= 3.0 * se + 1e-12)

    @pytest.mark.parametrize("q,oracle", [(1.5, "A"), (2.0, "A"), (2.0, "B"), (4.0, "B")])
    def test_lipschitz_audit(self, q, oracle):
        env = make_hard(q=q, oracle=oracle, d=5, seed=6)
        rng = substream(7)
        grid = [rng.normal(size=5) * 3 for _ in range(200)]
        assert lipschitz_audit(env, grid) <= 1.0 + 1e-9

    def test_dual_norm_gradient_bound_small_q(self):
        # ||grad||_q^2 <= c^2 d^(2/q - 2) on a grid, q in [1, 2] regime
        env = make_hard(q=1.5, oracle="A", d=5, seed=8)
        rng = substream(9)
        bound = env.c**2 * env.d ** (2.0 / env.q - 2.0)
        for _ in range(200):
            x = rng.normal(size=5) * 3
            assert np.linalg.norm(env.gradient(x), ord=env.q) ** 2 <= bound + 1e-12

    def test_noise_variance_within_sigma2(self):
        for q, oracle in [(1.5, "A"), (2.0, "A"), (4.0, "B")]:
            env = make_hard(q=q, oracle=oracle, d=5, sigma=2.0, seed=11)
            x = substream(12).normal(size=5)
            n = 50000
            sq = np.empty(n)
            for t in range(n):
                s = env.query(x, t)
                sq[t] = np.linalg.norm(s.g_hat - s.g_true, ord=q) ** 2
            se = sq.std(ddof=1) / math.sqrt(n)
            assert sq.mean() <= env.sigma**2 + 3.0 * se

    def test_convex_along_coordinates(self):
        env = make_hard(seed=13)
        ts = np.linspace(-3, 3, 121)
        for i in range(env.d):
            vals = []
            for v in ts:
                x = np.zeros(env.d)
                x[i] = v
                vals.append(env.loss(x))
            second = np.diff(vals, 2)
            assert np.all(second >= -1e-9)

    def test_minimizer_location(self):
        env = make_hard(seed=14)
        fmin = env.loss(env.minimizer)
        rng = substream(15)
        for _ in range(100):
            assert env.loss(env.minimizer + rng.normal(size=env.d)) >= fmin - 1e-12


class TestPrivateConvex:
    def test_subgradient_unit_norm(self):
        env = PrivateConvex(np.array([1.0, 0.0]), rng=substream(20))
        s = env.query(np.array([3.0, 1.0]), 0)
        assert np.linalg.norm(s.g_true) == pytest.approx(1.0)

    def test_comparator_loss_uses_same_draw(self):
        env = PrivateConvex(np.array([0.5, -0.5]), rng=substream(21))
        s = env.query(np.array([1.0, 1.0]), 0)
        u = np.array([1.0, 1.0])
        assert env.comparator_loss(u) == pytest.approx(s.loss_true)

    def test_population_gap_closed_form(self):
        d = 5
        env = PrivateConvex(np.zeros(d), rng=substream(22))
        w = np.ones(d)
        assert env.population_gap(w) == pytest.approx(
            sphere_mean_abs_coord(d) * math.sqrt(d)
        )

    def test_sphere_constant_matches_monte_carlo(self):
        d = 4
        rng = substream(23)
        xs = rng.normal(size=(200000, d))
        xs /= np.linalg.norm(xs, axis=1, keepdims=True)
        mc = np.abs(xs[:, 0]).mean()
        assert sphere_mean_abs_coord(d) == pytest.approx(mc, abs=4e-3)


class TestOnlineToBatch:
    def test_single_iterate(self):
        np.testing.assert_array_equal(online_to_batch([np.array([2.0, 3.0])]), [2.0, 3.0])

    def test_two_scalars(self):
        assert online_to_batch([np.array([0.0]), np.array([2.0])])[0] == 1.0

    def test_identical_vectors_bit_stable(self):
        v = np.array([0.1, 1 / 3, math.pi])
        for n in (3, 7, 10, 1000):
            out = online_to_batch([v.copy() for _ in range(n)])
            np.testing.assert_array_equal(out, v)

    def test_empty_raises(self):
        with pytest.raises(EmptySequence):
            online_to_batch([])


class TestRegretAccounting:
    def test_true_regret_identity_deterministic(self):
        # two accounting routes agree on a noise-free environment
        env = Absolute1D(2.0)
        u = np.array([1.0])
        xs = [np.array([v]) for v in (0.0, 0.5, 1.5, 2.5, 2.0)]
        total_a = 0.0
        losses = []
        for t, x in enumerate(xs):
            s = env.query(x, t)
            total_a += s.loss_true - env.comparator_loss(u)
            losses.append(s.loss_true)
        total_b = sum(losses) - len(xs) * abs(u[0] - 2.0)
        assert abs(total_a - total_b) <= 1e-9

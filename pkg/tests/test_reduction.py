"""Magnitude-direction composition: predictions, feedback split, decomposition."""

import math

import numpy as np
import pytest

from banco.betting import BettingConfig, BettingState, NoiseSpec, compute_bet
from banco.direction import DirectionState, EUCLIDEAN
from banco.reduction import BanachLearnerState, banach_predict, banach_update


def fresh_state(dim=3, sigma2=1.0, G=1.0):
    cfg = BettingConfig.build(tau=1.0, G=G, noise=NoiseSpec(sigma2, sigma2, 0.0))
    return BanachLearnerState.fresh(cfg, dim)


class TestPredict:
    def test_round_one_is_zero_vector(self):
        st = fresh_state()
        np.testing.assert_array_equal(banach_predict(st), np.zeros(3))

    def test_norm_bounded_by_bet(self):
        rng = np.random.default_rng(0)
        st = fresh_state(dim=4)
        for _ in range(50):
            x = banach_predict(st)
            w = compute_bet(st.bettor, st.bettor_config)
            assert np.linalg.norm(x) <= abs(w) + 1e-12
            st = banach_update(st, rng.normal(size=4))

    def test_forced_direction_scales_bet(self):
        st = fresh_state(dim=2, sigma2=2.0)
        bettor = BettingState(t=1, x=3.0, wealth=1.0, y_shorthand=2.0)
        forced = BanachLearnerState(
            bettor=bettor,
            bettor_config=st.bettor_config,
            direction=DirectionState(y=np.array([1.0, 0.0]), grad_sq_sum=1.0, norm=EUCLIDEAN, t=1),
            round=1,
        )
        w = compute_bet(bettor, st.bettor_config)
        np.testing.assert_allclose(banach_predict(forced), [w, 0.0], rtol=1e-12)


class TestUpdate:
    def test_zero_gradient_feeds_zeros(self):
        st = fresh_state()
        st2 = banach_update(st, np.zeros(3))
        assert st2.bettor.x == 0.0 and st2.bettor.wealth == st.bettor_config.tau
        np.testing.assert_array_equal(st2.direction.y, np.zeros(3))
        assert st2.round == 1

    def test_scalar_feedback_is_inner_product(self):
        st = fresh_state(dim=2)
        forced = BanachLearnerState(
            bettor=st.bettor,
            bettor_config=st.bettor_config,
            direction=DirectionState(y=np.array([0.6, 0.8]), grad_sq_sum=1.0, norm=EUCLIDEAN, t=1),
            round=1,
        )
        out = banach_update(forced, np.array([1.0, 2.0]))
        assert out.bettor.x == pytest.approx(2.2)

    def test_feedback_within_dual_norm(self):
        rng = np.random.default_rng(5)
        st = fresh_state(dim=6)
        for _ in range(80):
            g = rng.normal(size=6) * rng.uniform(0.1, 3.0)
            prev_x = st.bettor.x
            st = banach_update(st, g)
            assert abs(st.bettor.x - prev_x) <= np.linalg.norm(g) + 1e-12

    def test_round_counters_stay_aligned(self):
        rng = np.random.default_rng(6)
        st = fresh_state()
        for _ in range(10):
            st = banach_update(st, rng.normal(size=3))
        assert st.round == st.bettor.t == st.direction.t == 10


class TestDecomposition:
    """sum <g, u - x_t> == sum s_t*(||u|| - w_t) + ||u|| * sum <g, u/||u|| - y_t>."""

    def run_identity(self, seed: int, dim: int, T: int) -> float:
        rng = np.random.default_rng(seed)
        st = fresh_state(dim=dim)
        u = rng.normal(size=dim) * rng.uniform(0.0, 5.0)
        un = np.linalg.norm(u)
        u_dir = u / un if un > 0 else np.zeros(dim)
        lhs = 0.0
        term_mag = 0.0
        term_dir = 0.0
        for _ in range(T):
            x_t = banach_predict(st)
            y_t = st.direction.y
            w_t = compute_bet(st.bettor, st.bettor_config)
            g = rng.normal(size=dim)
            s = g @ y_t
            lhs += g @ (u - x_t)
            term_mag += s * (un - w_t)
            term_dir += g @ (u_dir - y_t)
            st = banach_update(st, g)
        return abs(lhs - (term_mag + un * term_dir))

    def test_identity_random_runs(self):
        for seed in range(25):
            assert self.run_identity(seed, dim=4, T=60) <= 1e-9

    def test_identity_zero_comparator(self):
        rng = np.random.default_rng(99)
        st = fresh_state(dim=3)
        lhs = 0.0
        rhs = 0.0
        for _ in range(40):
            x_t = banach_predict(st)
            w_t = compute_bet(st.bettor, st.bettor_config)
            g = rng.normal(size=3)
            lhs += g @ (0.0 - x_t)
            rhs += (g @ st.direction.y) * (0.0 - w_t)
            st = banach_update(st, g)
        assert abs(lhs - rhs) <= 1e-9


class TestExpectedRegretBound:
    def test_mc_regret_under_combined_ceiling(self):
        # mean linearized regret of the composed learner stays below the
        # magnitude ceiling plus the direction term, within 3 SE
        from banco.harness import run_experiment, spec_from_mapping

        spec = spec_from_mapping(
            dict(
                algorithm="banco_banach",
                environment="linear",
                noise="gaussian",
                noise_s2=0.5,
                g_value=0.8,
                T=256,
                trials=400,
                comparators=(0.5, 2.0, 8.0),
                seed=77,
                d=5,
            )
        )
        recs = run_experiment(spec)
        for c in (0.5, 2.0, 8.0):
            vals = np.array([r.regret_lin for r in recs if r.t == 256 and r.comparator == c])
            ceiling = next(r.ceiling for r in recs if r.t == 256 and r.comparator == c)
            se = vals.std(ddof=1) / math.sqrt(len(vals))
            assert vals.mean() <= ceiling + 3.0 * se

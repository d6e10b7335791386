"""Comparison learners: fixed- and adaptive-step unconstrained gradient ascent,
and a variance-blind bettor used as a negative control.

On linear losses, fixed-step ascent's iterate is just eta times the running
gradient sum, so zero-mean noise leaves its expected regret untouched; on
curved losses its regret scales with the squared comparator norm.  The naive
bettor keeps the mean-bound part of the betting discount but drops the noise
variance term; with noise-free coins it coincides with the full learner,
while under real noise its expected-wealth supermartingale property breaks.

A third tempting baseline is documented here rather than implemented:
condition on the high-probability event that every observed gradient stays
within a log-sized envelope and run a bounded-gradient parameter-free
learner.  The resulting bound controls regret against the *observed*
gradients only on that event; off the event the iterates of an unconstrained
learner are themselves unbounded, so the rare-event contribution to expected
regret cannot be capped by any fixed multiple of the comparator and horizon,
and no expected-regret guarantee comes out.  That failure is what motivates
folding the noise into the betting potential instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .betting import BettingConfig, BettingState, NoiseSpec, compute_bet, update
from .noise import NoiseOracle

__all__ = [
    "OgdFixed",
    "OgdAdaptive",
    "BancoLearner",
    "ogd_fixed",
    "naive_bettor",
    "EquivalenceReport",
    "ogd_noise_free_equivalence_demo",
]


class OgdFixed:
    """Unconstrained gradient ascent w_{t+1} = w_t + eta * g_hat_t, w_1 = 0."""

    def __init__(self, eta: float, dim: int = 1):
        if not eta > 0:
            raise ValueError("eta must be > 0")
        self.eta = float(eta)
        self.w = np.zeros(dim)

    def predict(self) -> np.ndarray:
        return self.w

    def update(self, g_hat) -> None:
        self.w = self.w + self.eta * np.asarray(g_hat, dtype=float)


class OgdAdaptive:
    """Unconstrained ascent with stepsizes eta0 / sqrt(sum of squared gradient norms)."""

    def __init__(self, eta0: float = 1.0, dim: int = 1):
        if not eta0 > 0:
            raise ValueError("eta0 must be > 0")
        self.eta0 = float(eta0)
        self.w = np.zeros(dim)
        self.grad_sq_sum = 0.0

    def predict(self) -> np.ndarray:
        return self.w

    def update(self, g_hat) -> None:
        g = np.asarray(g_hat, dtype=float)
        self.grad_sq_sum += float(np.dot(g, g))
        if self.grad_sq_sum > 0:
            self.w = self.w + self.eta0 / math.sqrt(self.grad_sq_sum) * g


class BancoLearner:
    """Scalar coin-betting learner whose iterate is its bet."""

    def __init__(self, config: BettingConfig):
        self.config = config
        self.state = BettingState.fresh(config)
        self._bet = 0.0

    def predict(self) -> np.ndarray:
        self._bet = compute_bet(self.state, self.config)
        return np.array([self._bet])

    def update(self, g_hat) -> None:
        self.state = update(self.state, float(np.atleast_1d(g_hat)[0]), self.config)

    @property
    def wealth(self) -> float:
        return self.state.wealth


def ogd_fixed(eta: float, dim: int = 1) -> OgdFixed:
    """Factory for the fixed-step learner."""
    return OgdFixed(eta, dim)


def naive_bettor(tau: float, G: float) -> BancoLearner:
    """Betting learner that ignores the noise variance in its discount.

    Built by zeroing sigma^2 in the config: the per-round discount becomes
    t*G^2, so with actually-noise-free coins it is identical to the full
    learner, and under noise it is the documented failure mode.
    """
    cfg = BettingConfig.build(tau=tau, G=G, noise=NoiseSpec(0.0, 0.0, 0.0))
    return BancoLearner(cfg)


@dataclass(frozen=True)
class EquivalenceReport:
    """Monte-Carlo comparison of fixed-step ascent on noisy vs noise-free linear losses."""

    regret_noise_free: float
    regret_noisy_mean: float
    regret_noisy_se: float
    iterate_gap_max_z: float  # largest |E w_t - eta*sum g| in SE units across rounds

    @property
    def within_3se(self) -> bool:
        gap = abs(self.regret_noisy_mean - self.regret_noise_free)
        return gap <= 3.0 * self.regret_noisy_se if self.regret_noisy_se > 0 else gap == 0.0


def ogd_noise_free_equivalence_demo(
    g_seq: np.ndarray,
    noise: NoiseOracle,
    trials: int,
    eta: float,
    seed: int = 0,
) -> EquivalenceReport:
    """Fixed losses set before the game: compare mean noisy regret to the
    deterministic noise-free regret, and mean iterates to their targets.

    For linear losses, regret(u) = <sum g, u> - sum_t <g_t, w_t>; the
    comparator term is identical for the noisy and noise-free runs, so the
    comparison is made on the comparator-free part -sum_t <g_t, w_t>.
    """
    from .noise import substream

    g_seq = np.atleast_2d(np.asarray(g_seq, dtype=float))
    T, d = g_seq.shape
    eta = float(eta)

    # deterministic noise-free run: w_t = eta * sum_{s<t} g_s
    w_free = eta * np.vstack([np.zeros(d), np.cumsum(g_seq, axis=0)[:-1]])
    regret_free = -float(np.sum(w_free * g_seq))

    # vectorized Monte Carlo over trials with per-trial noise streams
    regrets = np.empty(trials)
    w_mean = np.zeros((T, d))
    for i in range(trials):
        xi = type(noise)(
            **_oracle_params(noise), rng=substream(seed, i)
        ).sample_block(T)
        g_hat = g_seq + xi
        w = eta * np.vstack([np.zeros(d), np.cumsum(g_hat, axis=0)[:-1]])
        regrets[i] = -np.sum(w * g_seq)
        w_mean += w
    w_mean /= trials
    noisy_mean = float(np.mean(regrets))
    noisy_se = float(np.std(regrets, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0

    # per-round check that the mean iterate matches the noise-free one
    xi_var = noise.spec().sigma2 / max(noise.d, 1)
    if xi_var > 0:
        se_w = eta * np.sqrt(xi_var * np.arange(T)[:, None] / trials)
        with np.errstate(invalid="ignore", divide="ignore"):
            z = np.abs(w_mean - w_free) / np.where(se_w > 0, se_w, np.inf)
        gap_z = float(np.nanmax(z))
    else:
        gap_z = float(np.max(np.abs(w_mean - w_free)))
    return EquivalenceReport(
        regret_noise_free=regret_free,
        regret_noisy_mean=noisy_mean,
        regret_noisy_se=noisy_se,
        iterate_gap_max_z=gap_z,
    )


def _oracle_params(oracle: NoiseOracle) -> dict:
    """Constructor kwargs (minus rng) to clone an oracle onto a new stream."""
    from . import noise as _n

    if isinstance(oracle, _n.GaussianIso):
        return {"s2": oracle.s2, "d": oracle.d}
    if isinstance(oracle, _n.LaplaceMechanism):
        return {"epsilon": oracle.epsilon, "d": oracle.d}
    if isinstance(oracle, _n.BoundedUniform):
        return {"r": oracle.r, "d": oracle.d}
    return {"d": oracle.d}

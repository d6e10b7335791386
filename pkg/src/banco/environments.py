"""Loss/gradient environments for the benchmark harness.

All environments speak the gain convention: the learner receives (noisy)
*negative* subgradients, so moving with the gradient decreases the loss.
Each query returns a :class:`GradientSample` carrying the conditional-mean
gradient (for linearized-regret accounting), the realized noise, their sum,
and the realized loss at the query point.  ``comparator_loss`` evaluates the
same round's loss at a fixed comparator, which is what true-regret accounting
needs for environments with per-round randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, EmptySequence
from .noise import NoiseOracle, NoneNoise

__all__ = [
    "GradientSample",
    "LinearFixed",
    "Absolute1D",
    "RampHardInstance",
    "PrivateConvex",
    "env_query",
    "online_to_batch",
    "lipschitz_audit",
    "sphere_mean_abs_coord",
]


@dataclass(frozen=True)
class GradientSample:
    """One round of oracle feedback: g_hat = g_true + xi."""

    g_true: np.ndarray
    xi: np.ndarray
    g_hat: np.ndarray
    loss_true: float

    @classmethod
    def make(cls, g_true, xi, loss_true: float) -> "GradientSample":
        g_true = np.asarray(g_true, dtype=float)
        xi = np.asarray(xi, dtype=float)
        return cls(g_true=g_true, xi=xi, g_hat=g_true + xi, loss_true=float(loss_true))


def _check_point(x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(x)):
        raise DomainError("query point contains non-finite entries")
    return x


class LinearFixed:
    """Oblivious linear losses l_t(x) = -<g_t, x> for a fixed gain sequence,
    with optional additive noise from a composed oracle."""

    def __init__(self, g_seq: Sequence[np.ndarray] | np.ndarray, noise: NoiseOracle | None = None):
        self.g_seq = np.atleast_2d(np.asarray(g_seq, dtype=float))
        self.d = self.g_seq.shape[1]
        self.noise = noise if noise is not None else NoneNoise(self.d)
        self._t = None

    def query(self, x, t: int) -> GradientSample:
        x = _check_point(x)
        g = self.g_seq[t % len(self.g_seq)]
        xi = self.noise.sample()
        self._t = t
        return GradientSample.make(g, xi, loss_true=-float(np.dot(g, x)))

    def comparator_loss(self, u) -> float:
        g = self.g_seq[self._t % len(self.g_seq)]
        return -float(np.dot(g, np.atleast_1d(u)))

    def grad_bound(self, q: float) -> float:
        return float(np.max([np.linalg.norm(g, ord=q) for g in self.g_seq]))


class Absolute1D:
    """Scalar stochastic optimization of |x - u_star| with additive noise."""

    def __init__(self, u_star: float, noise: NoiseOracle | None = None):
        self.u_star = float(u_star)
        self.noise = noise if noise is not None else NoneNoise(1)

    def query(self, x, t: int) -> GradientSample:
        x = _check_point(x)
        v = float(x[0])
        g = np.array([math.copysign(1.0, self.u_star - v)]) if v != self.u_star else np.array([0.0])
        xi = self.noise.sample()
        return GradientSample.make(g, xi, loss_true=abs(v - self.u_star))

    def comparator_loss(self, u) -> float:
        return abs(float(np.atleast_1d(u)[0]) - self.u_star)

    def grad_bound(self, q: float) -> float:
        return 1.0


def _ramp_value(x: np.ndarray, r: float, slope: float) -> np.ndarray:
    """Piecewise-linear coordinate profile with slope +-1 outside [-r, r] and
    +-slope inside; ``slope`` carries the sign (+sigma or -sigma)."""
    lo = -x + r * (-slope - 1.0)
    mid = slope * x
    hi = x + r * (slope - 1.0)
    return np.where(x <= -r, lo, np.where(x >= r, hi, mid))


def _ramp_slope(x: np.ndarray, r: float, slope: float) -> np.ndarray:
    return np.where(x < -r, -1.0, np.where(x > r, 1.0, slope))


class RampHardInstance:
    """Randomized hard instance: per-coordinate ramps mixed by a sign vector.

    The target function is g_alpha(x) = (c/d) * sum_i [(1/2 + alpha_i*delta) *
    f_i_plus(x) + (1/2 - alpha_i*delta) * f_i_minus(x)] with ramp slopes
    +-sigma inside [-r, r] and +-1 outside; delta <= 1/(2*sigma) keeps it
    convex.  Oracle 'A' reveals one uniformly chosen coordinate's coin per
    query (c = 1/2); oracle 'B' reveals all d coins (c = d^(1-1/q) / 2).
    The minimizer sits at -alpha*r componentwise.
    """

    def __init__(
        self,
        alpha: np.ndarray,
        delta: float,
        r: float,
        q: float,
        sigma: float,
        oracle: str,
        rng: np.random.Generator | int | None = None,
    ):
        self.alpha = np.asarray(alpha, dtype=float)
        if not np.all(np.abs(self.alpha) == 1.0):
            raise ValueError("alpha must be a +-1 sign vector")
        self.d = self.alpha.size
        if not (sigma >= 1.0):
            raise ValueError("sigma must be >= 1")
        if not (0.0 < delta <= 1.0 / (2.0 * sigma)):
            raise ValueError("delta must lie in (0, 1/(2*sigma)] to keep the losses convex")
        if not r > 0:
            raise ValueError("r must be > 0")
        self.delta, self.r, self.q, self.sigma = float(delta), float(r), float(q), float(sigma)
        self.oracle = oracle.upper()
        if self.oracle not in ("A", "B"):
            raise ValueError("oracle must be 'A' or 'B'")
        if self.oracle == "A":
            self.c = 0.5
        else:
            self.c = 0.5 * self.d ** (1.0 - 1.0 / self.q)
        self.rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self.minimizer = -self.alpha * self.r

    # -- analytic pieces ---------------------------------------------------

    def loss(self, x) -> float:
        x = _check_point(x)
        fp = _ramp_value(x, self.r, self.sigma)
        fm = _ramp_value(x, self.r, -self.sigma)
        w_plus = 0.5 + self.alpha * self.delta
        w_minus = 0.5 - self.alpha * self.delta
        return float(self.c / self.d * np.sum(w_plus * fp + w_minus * fm))

    def gradient(self, x) -> np.ndarray:
        """Analytic gradient of the loss at x."""
        x = _check_point(x)
        sp = _ramp_slope(x, self.r, self.sigma)
        sm = _ramp_slope(x, self.r, -self.sigma)
        w_plus = 0.5 + self.alpha * self.delta
        w_minus = 0.5 - self.alpha * self.delta
        return self.c / self.d * (w_plus * sp + w_minus * sm)

    # -- oracle ------------------------------------------------------------

    def query(self, x, t: int) -> GradientSample:
        x = _check_point(x)
        if self.oracle == "A":
            i = int(self.rng.integers(self.d))
            p = 0.5 + self.alpha[i] * self.delta
            b = float(self.rng.random() < p)
            slope = b * _ramp_slope(x[i : i + 1], self.r, self.sigma) + (1.0 - b) * _ramp_slope(
                x[i : i + 1], self.r, -self.sigma
            )
            z_hat = np.zeros(self.d)
            z_hat[i] = self.c * slope[0]
        else:
            p = 0.5 + self.alpha * self.delta
            b = (self.rng.random(self.d) < p).astype(float)
            sp = _ramp_slope(x, self.r, self.sigma)
            sm = _ramp_slope(x, self.r, -self.sigma)
            z_hat = self.c / self.d * (b * sp + (1.0 - b) * sm)
        z_true = self.gradient(x)
        # gain convention: the learner sees negative subgradients
        return GradientSample.make(-z_true, -(z_hat - z_true), loss_true=self.loss(x))

    def comparator_loss(self, u) -> float:
        return self.loss(u)

    def grad_bound(self, q: float) -> float:
        slope = max(1.0, 2.0 * self.delta * self.sigma)
        return self.c / self.d * slope * self.d ** (1.0 / q)


def sphere_mean_abs_coord(d: int) -> float:
    """E|x_1| for x uniform on the unit sphere in R^d."""
    return math.gamma(d / 2.0) / (math.sqrt(math.pi) * math.gamma((d + 1) / 2.0))


class PrivateConvex:
    """Stochastic 1-Lipschitz convex loss with a known minimizer.

    Data points are uniform on the unit sphere; the per-round loss is
    h(w, x_t) = |<w - w_star, x_t>| whose subgradients have unit L2 norm.
    The population objective is H(w) = C_d * ||w - w_star||_2 with the
    closed-form sphere constant C_d, so suboptimality is exact, no MC needed.
    External sanitization noise (e.g. the Laplace mechanism) composes on top.
    """

    def __init__(self, w_star: np.ndarray, noise: NoiseOracle | None = None, rng=None):
        self.w_star = np.asarray(w_star, dtype=float)
        self.d = self.w_star.size
        self.noise = noise if noise is not None else NoneNoise(self.d)
        self.rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self._x_t = None

    def query(self, x, t: int) -> GradientSample:
        w = _check_point(x)
        data = self.rng.standard_normal(self.d)
        data /= np.linalg.norm(data)
        self._x_t = data
        margin = float(np.dot(w - self.w_star, data))
        sub = math.copysign(1.0, margin) * data if margin != 0.0 else np.zeros(self.d)
        xi = self.noise.sample()
        return GradientSample.make(-sub, xi, loss_true=abs(margin))

    def comparator_loss(self, u) -> float:
        return abs(float(np.dot(np.atleast_1d(u) - self.w_star, self._x_t)))

    def population_gap(self, w_bar) -> float:
        """H(w_bar) - H(w_star), exactly."""
        return sphere_mean_abs_coord(self.d) * float(
            np.linalg.norm(np.atleast_1d(w_bar) - self.w_star)
        )

    def grad_bound(self, q: float) -> float:
        return 1.0


def env_query(env, x, t: int) -> GradientSample:
    """Query an environment at a point; raises DomainError on non-finite input."""
    return env.query(x, t)


def online_to_batch(iterates: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    """Uniform average of the iterates.

    Anchored at the first iterate so that averaging T identical vectors
    returns that vector bit-for-bit; the anchored differences are summed with
    numpy's pairwise summation.
    """
    arr = np.asarray(iterates, dtype=float)
    if arr.size == 0:
        raise EmptySequence("cannot average an empty iterate sequence")
    first = arr[0]
    return first + np.mean(arr - first, axis=0)


def lipschitz_audit(env, grid: Sequence) -> float:
    """Largest analytic dual-norm gradient of the environment's loss over a grid."""
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be nonempty")
    if isinstance(env, RampHardInstance):
        return float(max(np.linalg.norm(env.gradient(x), ord=env.q) for x in grid))
    q = getattr(env, "q", 2.0)
    return env.grad_bound(q)

"""One-dimensional betting on noisy coin outcomes.

The learner bets a signed amount ``w_t`` on each round's coin; after the noisy
outcome ``g_hat`` is revealed, wealth moves by ``g_hat * w_t``.  The strategy
is a mixture over betting fractions ``beta``: wealth is tracked against the
potential

    F_t(x) = tau * Integral exp(beta * x - beta^2 * t * (sigma^2/2 + G^2)) dpi(beta)

whose quadratic-in-beta discount absorbs both the noise variance and the mean
bound, and the bet is the mixture of ``beta``-weighted increments

    w_t = tau * Integral beta * exp(beta * x - beta^2 * y) dpi(beta)

with ``x`` the running sum of observed coins and ``y = (t-1)*(sigma^2/2+G^2)``.
Unlike noise-free betting schemes, wealth may go negative on a path; only its
expectation is protected.

For the symmetric uniform prior the bet has a closed form in terms of the
error function.  Its textbook expression cannot be evaluated directly in
floating point (an ``exp(x^2/(4y))`` factor overflows and the erf terms cancel
catastrophically), so :func:`bet_uniform` assembles it from scaled
complementary error functions with every exponent kept non-positive, and
switches to an exact polynomial expansion in ``y`` near the ``y = 0``
singularity.  Other priors integrate numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import numerics
from .errors import NonConvergence
from .numerics import QuadratureSpec

__all__ = [
    "NoiseSpec",
    "UniformSymmetric",
    "TruncatedGaussian",
    "LILPrior",
    "Prior",
    "BettingConfig",
    "BettingState",
    "potential_value",
    "compute_bet",
    "bet_uniform",
    "update",
    "conjugate_bound",
    "regret_ceiling",
]

# Dispatch thresholds for the uniform-prior bet. Below SERIES_CUT (on y*a^2)
# the expansion in y is exact to machine precision and free of cancellation;
# the remaining guards push pathological corners to quadrature.
_SERIES_CUT = 5e-3
_Y_MIN = 1e-8
_X_GUARD = 700.0
_SERIES_XA_MAX = 600.0


@dataclass(frozen=True)
class NoiseSpec:
    """Sub-exponential noise parameters.

    ``sigma2`` bounds the conditional second moment of the noise (dual norm),
    ``sigma2_1d`` is the directional MGF parameter (E exp(b*<xi,a>) <=
    exp(b^2*sigma2_1d/2) for |b| <= 1/b_scale along unit directions), and
    ``b`` is the sub-exponential scale; ``b = 0`` means sub-Gaussian, i.e. the
    MGF bound holds for every b.  For loose MGF certificates ``sigma2_1d`` may
    exceed ``sigma2`` (the Laplace sanitization mechanism is an example), so
    no ordering between the two is enforced here.
    """

    sigma2: float = 0.0
    sigma2_1d: float = 0.0
    b: float = 0.0

    def __post_init__(self) -> None:
        for name in ("sigma2", "sigma2_1d", "b"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"NoiseSpec.{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class UniformSymmetric:
    """Uniform prior on [-a, a]; admits the closed-form bet."""

    a: float

    def __post_init__(self) -> None:
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError("UniformSymmetric needs finite a > 0")

    def log_density(self, beta):
        return np.where(np.abs(beta) <= self.a, -np.log(2.0 * self.a), -np.inf)


@dataclass(frozen=True)
class TruncatedGaussian:
    """Zero-mean Gaussian restricted to [-a, a]; no closed-form bet, quadrature only."""

    scale: float
    a: float

    def __post_init__(self) -> None:
        if not (self.scale > 0 and self.a > 0):
            raise ValueError("TruncatedGaussian needs scale > 0 and a > 0")

    def _mass(self) -> float:
        return math.sqrt(2.0 * math.pi) * self.scale * math.erf(self.a / (math.sqrt(2.0) * self.scale))

    def log_density(self, beta):
        beta = np.asarray(beta, dtype=float)
        return np.where(
            np.abs(beta) <= self.a,
            -(beta * beta) / (2.0 * self.scale**2) - np.log(self._mass()),
            -np.inf,
        )


@dataclass(frozen=True)
class LILPrior:
    """Heavy-tailed full-line prior 1 / (2*pi*|beta|*(ln^2(sigma_1d*|beta|) + 1)).

    Substituting u = ln(sigma_1d*|beta|) turns each half-line into a standard
    Cauchy density, so the total mass is exactly 1.  The absolute value inside
    the logarithm keeps the density real for beta < 0.
    """

    sigma_1d: float

    def __post_init__(self) -> None:
        if not (self.sigma_1d > 0 and math.isfinite(self.sigma_1d)):
            raise ValueError("LILPrior needs finite sigma_1d > 0")

    def density(self, beta):
        beta = np.asarray(beta, dtype=float)
        ab = np.abs(beta)
        with np.errstate(divide="ignore"):
            ln = np.log(self.sigma_1d * ab)
        return np.where(ab > 0, 1.0 / (2.0 * np.pi * ab * (ln * ln + 1.0)), np.inf)


Prior = Union[UniformSymmetric, TruncatedGaussian, LILPrior]


def _default_radius(G: float, b: float) -> float:
    """Largest admissible support radius min(k1/G, 1/b), inf when unconstrained."""
    k1 = numerics.solve_k1()
    r1 = k1 / G if G > 0 else math.inf
    r2 = 1.0 / b if b > 0 else math.inf
    return min(r1, r2)


@dataclass(frozen=True)
class BettingConfig:
    """Static inputs of the betting learner.

    ``tau`` is the initial endowment, ``G`` bounds the magnitude of the coin's
    conditional mean, ``noise`` carries the sub-exponential parameters, and
    ``a`` is the betting-fraction support radius, capped by min(k1/G, 1/b).
    """

    tau: float
    G: float
    noise: NoiseSpec
    prior: Prior
    a: float

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ValueError("tau must be > 0")
        if not self.G >= 0:
            raise ValueError("G must be >= 0")
        cap = _default_radius(self.G, self.noise.b)
        # slack admits the 6-digit rounding of k1 commonly used in configs
        if self.a > cap * (1 + 1e-6):
            raise ValueError(f"support radius a={self.a} exceeds min(k1/G, 1/b)={cap}")
        support = getattr(self.prior, "a", None)
        if support is not None and support > self.a * (1 + 1e-12):
            raise ValueError("prior support must sit inside [-a, a]")

    @classmethod
    def build(
        cls,
        tau: float,
        G: float,
        noise: NoiseSpec,
        prior: Prior | None = None,
        a: float | None = None,
    ) -> "BettingConfig":
        """Fill in the default radius a = min(k1/G, 1/b) and a uniform prior."""
        if a is None:
            a = _default_radius(G, noise.b)
        if prior is None:
            if not math.isfinite(a):
                raise ValueError(
                    "unbounded support (G = 0 and b = 0): a bounded prior is "
                    "undefined, pass an explicit LILPrior"
                )
            prior = UniformSymmetric(a)
        if isinstance(prior, LILPrior):
            a = math.inf if a is None else a
        return cls(tau=tau, G=G, noise=noise, prior=prior, a=a)

    @property
    def y_rate(self) -> float:
        """Per-round discount coefficient sigma^2/2 + G^2."""
        return self.noise.sigma2 / 2.0 + self.G**2


@dataclass(frozen=True)
class BettingState:
    """Value-semantics state after ``t`` completed rounds."""

    t: int
    x: float
    wealth: float
    y_shorthand: float

    @classmethod
    def fresh(cls, config: BettingConfig) -> "BettingState":
        return cls(t=0, x=0.0, wealth=config.tau, y_shorthand=0.0)


# ---------------------------------------------------------------------------
# Uniform-prior bet: series + erfcx closed form + quadrature guard
# ---------------------------------------------------------------------------


def _bet_series_scalar(x: float, y: float, a: float) -> float:
    """Expansion of (1/(2a)) * Int_{-a}^{a} beta*exp(beta*x - beta^2*y) dbeta in y.

    The inner series in x has positive terms only, so there is no cancellation;
    the alternating outer series in y converges after a handful of terms when
    y*a^2 is small.  Valid for x >= 0.
    """
    total = 0.0
    ycoef = 1.0  # (-y)^k / k!
    for k in range(16):
        # m_k = 2 * sum_{j odd} x^j a^(2k+j+2) / ((2k+j+2) * j!)
        term = x * a ** (2 * k + 3) / (2 * k + 3)
        m = 0.0
        j = 1
        while True:
            m += term
            jn = j + 2
            term *= x * x * a * a * (2 * k + j + 2) / ((2 * k + jn + 2) * (j + 1) * jn)
            j = jn
            if term < 1e-18 * m and j > x * a:
                break
            if j > 20000:  # pragma: no cover - x*a capped well below this
                break
        m *= 2.0
        contrib = ycoef * m
        total += contrib
        ycoef *= -y / (k + 1)
        if abs(ycoef * m) < 1e-18 * abs(total):
            break
    return total / (2.0 * a)


def _bet_quadrature_uniform(x: float, y: float, a: float, spec: QuadratureSpec) -> float:
    """Exponent-shifted quadrature of the uniform-prior bet integrand, x >= 0."""
    beta_peak = min(max(x / (2.0 * y), -a), a) if y > 0 else a
    shift = beta_peak * x - beta_peak * beta_peak * y

    def f(beta: float) -> float:
        return beta * math.exp(beta * x - beta * beta * y - shift)

    val = numerics.integrate(f, -a, a, spec, points=[0.0, beta_peak]) / (2.0 * a)
    return math.exp(shift) * val if val != 0.0 else 0.0


def bet_uniform(x, y, a: float, tau: float = 1.0, spec: QuadratureSpec = QuadratureSpec()):
    """Bet under the uniform prior on [-a, a]; vectorized over x and y.

    Evaluates ``tau/(2a) * Int_{-a}^{a} beta * exp(beta*x - beta^2*y) dbeta``
    exactly odd in ``x``.  Dispatch: polynomial expansion while ``y*a^2`` is
    small (covers the y = 0 round-one case), a cancellation-free erfcx
    assembly otherwise, and adaptive quadrature for the remaining corners
    (``y`` below 1e-8 with a huge radius, or |x| > 700*sqrt(y)).
    """
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    scalar = x_arr.ndim == 0 and y_arr.ndim == 0
    if x_arr.shape == y_arr.shape:
        x_b, y_b = np.atleast_1d(x_arr), np.atleast_1d(y_arr)
    else:
        x_b, y_b = np.broadcast_arrays(np.atleast_1d(x_arr), np.atleast_1d(y_arr))
    sign = np.sign(x_b)
    ax = np.abs(x_b)
    out = np.zeros_like(ax)

    nz = ax > 0
    series = nz & (y_b * (a * a) <= _SERIES_CUT) & (ax * a <= _SERIES_XA_MAX)
    quad = nz & ~series & ((y_b < _Y_MIN) | (ax > _X_GUARD * np.sqrt(np.maximum(y_b, 0.0))))
    closed = nz & ~series & ~quad

    if series.any():
        for idx in np.argwhere(series):
            out[tuple(idx)] = _bet_series_scalar(ax[tuple(idx)], y_b[tuple(idx)], a)
    if quad.any():
        for idx in np.argwhere(quad):
            out[tuple(idx)] = _bet_quadrature_uniform(ax[tuple(idx)], y_b[tuple(idx)], a, spec)

    if closed.any():
        xc = ax[closed]
        yc = y_b[closed]
        sq = np.sqrt(yc)
        z1 = (2.0 * a * yc + xc) / (2.0 * sq)
        z2 = (2.0 * a * yc - xc) / (2.0 * sq)
        denom = 8.0 * a * yc * sq
        res = np.empty_like(xc)

        near = z2 >= 0.0  # peak inside the support: the erf sum has no cancellation
        if np.any(near):
            xn, yn, z1n, z2n, dn = xc[near], yc[near], z1[near], z2[near], denom[near]
            e1 = xn * xn / (4.0 * yn)
            with np.errstate(over="ignore"):
                P = np.sqrt(np.pi) * xn * np.exp(e1) * (
                    numerics.erf(z1n) + numerics.erf(z2n)
                )
                Q = 2.0 * np.sqrt(yn) * (
                    np.exp(-a * a * yn - a * xn) - np.exp(-a * a * yn + a * xn)
                )
                res[near] = (P + Q) / dn

        far = ~near  # peak beyond the support: factor the e^(a*x - a^2*y) scale out
        if np.any(far):
            xf, yf, z1f, z2f, df = xc[far], yc[far], z1[far], z2[far], denom[far]
            h = -z2f
            bracket = np.sqrt(np.pi) * xf * (
                numerics.erfcx(h) - np.exp(-2.0 * a * xf) * numerics.erfcx(z1f)
            ) + 2.0 * np.sqrt(yf) * np.expm1(-2.0 * a * xf)
            L = a * xf - a * a * yf
            with np.errstate(over="ignore", divide="ignore"):
                res[far] = np.exp(L + np.log(bracket) - np.log(df))
        out[closed] = res

    out = tau * sign * out
    return float(out[()][0]) if scalar else out.reshape(np.broadcast(x_arr, y_arr).shape)


def _bet_quadrature_prior(x: float, y: float, config: BettingConfig, spec: QuadratureSpec) -> float:
    """Generic-prior bet via quadrature; handles bounded and full-line priors."""
    prior = config.prior
    tau = config.tau
    if isinstance(prior, LILPrior):
        if x == 0.0:
            return 0.0
        sgn = 1.0 if x > 0 else -1.0
        ax = abs(x)
        sig = prior.sigma_1d
        # odd part: Int_0^inf beta*(e^(b*x) - e^(-b*x))*e^(-b^2*y) rho(beta) dbeta
        # in u = ln(sig*beta) coordinates; small-beta tail is O(beta^2) and dropped
        # below beta_lo where its relative contribution is < 1e-14.
        v = y
        peak = ax / (2.0 * v) if v > 0 else 1.0
        phimax = max(ax * peak - peak * peak * v, 0.0)
        beta_hi = (ax + math.sqrt(ax * ax + 4.0 * v * (phimax + 45.0))) / (2.0 * v) if v > 0 else math.inf
        if not math.isfinite(beta_hi):
            raise NonConvergence("full-line bet needs a positive quadratic discount")
        beta_lo = min(1e-8 / (ax + math.sqrt(v) + 1.0), beta_hi / 10.0)
        u_lo, u_hi = math.log(sig * beta_lo), math.log(sig * beta_hi)

        def f(u: float) -> float:
            beta = math.exp(u) / sig
            body = math.exp(beta * ax - beta * beta * v - phimax) - math.exp(
                -beta * ax - beta * beta * v - phimax
            )
            return beta * body / (2.0 * math.pi * (u * u + 1.0))

        u_peak = math.log(sig * max(min(peak, beta_hi), beta_lo))
        val = numerics.integrate(f, u_lo, u_hi, spec, points=[u_peak])
        return sgn * tau * math.exp(phimax) * val

    # all supported priors are symmetric: integrate at |x| and restore the sign,
    # which keeps the bet exactly odd
    sgn = 1.0 if x > 0 else -1.0
    ax = abs(x)
    a = getattr(prior, "a", config.a)
    peak = min(ax / (2.0 * y), a) if y > 0 else a
    shift = peak * ax - peak * peak * y

    def g(beta: float) -> float:
        ld = float(prior.log_density(beta))
        return beta * math.exp(beta * ax - beta * beta * y - shift + ld)

    val = numerics.integrate(g, -a, a, spec, points=[0.0, peak])
    return sgn * tau * math.exp(shift) * val


def compute_bet(state: BettingState, config: BettingConfig, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Bet for the upcoming round given the completed-round state.

    Odd in the running coin sum; zero on the first round.  Uniform priors take
    the closed form, other priors integrate numerically.
    """
    x, y = state.x, state.y_shorthand
    if x == 0.0:
        return 0.0
    if isinstance(config.prior, UniformSymmetric):
        return bet_uniform(x, y, config.prior.a, config.tau, spec)
    return _bet_quadrature_prior(x, y, config, spec)


def potential_value(
    x: float,
    t: int,
    config: BettingConfig,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Wealth potential F_t(x) = tau * Int exp(beta*x - beta^2*t*y_rate) dpi(beta).

    Strictly positive; computed by exponent-shifted quadrature so that large
    |x| does not overflow before the genuine value does.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    y = t * config.y_rate
    prior = config.prior
    tau = config.tau
    if isinstance(prior, LILPrior):
        return tau * _lil_mixture(x, y, prior.sigma_1d, spec)
    a = getattr(prior, "a")
    peak = min(max(x / (2.0 * y), -a), a) if y > 0 else (a if x >= 0 else -a)
    shift = peak * x - peak * peak * y

    def f(beta: float) -> float:
        ld = float(prior.log_density(beta))
        return math.exp(beta * x - beta * beta * y - shift + ld)

    val = numerics.integrate(f, -a, a, spec, points=[0.0, peak])
    with np.errstate(over="ignore"):
        return float(tau * math.exp(shift) * val)


def _lil_mixture(x: float, v: float, sigma_1d: float, spec: QuadratureSpec) -> float:
    """Int over the full line of exp(beta*x - beta^2*v) against the heavy-tailed prior.

    Works in u = ln(sigma_1d*|beta|) coordinates where the prior is Cauchy.
    The slowly-decaying small-beta tail is summed analytically (the integrand
    is 1 + O(beta) there), the rest by adaptive quadrature.
    """
    ax = abs(x)
    if v <= 0:
        if ax > 0:
            raise NonConvergence("full-line mixture diverges without a quadratic discount")
        return 1.0  # no discount, no tilt: the prior's total mass
    peak = ax / (2.0 * v)
    phimax = max(ax * peak - peak * peak * v, 0.0)
    beta_hi = (ax + math.sqrt(ax * ax + 4.0 * v * (phimax + 45.0))) / (2.0 * v)
    beta_lo = min(1e-9 / (ax + math.sqrt(v) + 1.0), beta_hi / 10.0)
    u_lo, u_hi = math.log(sigma_1d * beta_lo), math.log(sigma_1d * beta_hi)
    # prior mass below beta_lo on both half-lines; integrand there is 1 + O(beta)
    tail = (0.5 + math.atan(u_lo) / math.pi)

    def f(u: float) -> float:
        beta = math.exp(u) / sigma_1d
        body = math.exp(beta * ax - beta * beta * v - phimax) + math.exp(
            -beta * ax - beta * beta * v - phimax
        )
        return body / (2.0 * math.pi * (u * u + 1.0))

    u_peak = math.log(sigma_1d * max(min(peak, beta_hi), beta_lo)) if peak > 0 else u_lo
    val = numerics.integrate(f, u_lo, u_hi, spec, points=[u_peak])
    # below beta_lo the exponential factor is 1 within ~1e-14 relative
    return math.exp(phimax) * val + tail


def update(state: BettingState, g_hat: float, config: BettingConfig) -> BettingState:
    """Consume one observed coin: bet, settle wealth, advance the sums.

    Wealth is allowed to go negative; noisy outcomes make pathwise
    nonnegativity impossible and only the expectation is protected.
    """
    if not math.isfinite(g_hat):
        raise ValueError("g_hat must be finite")
    w = compute_bet(state, config)
    t_new = state.t + 1
    return BettingState(
        t=t_new,
        x=state.x + g_hat,
        wealth=state.wealth + g_hat * w,
        y_shorthand=t_new * config.y_rate,
    )


def conjugate_bound(u: float, S: float, a: float, tau: float) -> float:
    """Dual (conjugate) bound on the uniform-prior potential at comparator u.

    max of a slow sqrt-log branch and a linear-log branch; each branch is
    clamped at zero where its formula goes negative, and the bound is even
    in u.
    """
    if not (S > 0 and a > 0 and tau > 0):
        raise ValueError("need S > 0, a > 0, tau > 0")
    au = abs(u)
    if au == 0.0:
        return 0.0
    b1 = au * math.sqrt(2.0 * S * math.log1p(16.0 * math.e * a * a * S * S * au * au / (tau * tau)))
    log_arg = 32.0 * au / (3.0 * math.e * a * tau)
    b2 = (8.0 / (3.0 * a)) * au * math.log(log_arg) if log_arg > 1.0 else 0.0
    return max(b1, max(b2, 0.0))


def regret_ceiling(u: float, T: int, config: BettingConfig) -> float:
    """Expected-regret ceiling tau + conjugate bound with S = T*(sigma^2/2 + G^2)."""
    if T < 1:
        raise ValueError("T must be >= 1")
    if u == 0.0:
        return config.tau
    S = T * config.y_rate
    return config.tau + conjugate_bound(u, S, config.a, config.tau)

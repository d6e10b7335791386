"""Anytime-valid concentration from the betting potential.

With zero-mean coins the potential is a nonnegative supermartingale, so the
maximal inequality P[max_t F_t >= 1/delta] <= tau*delta holds at every time
simultaneously.  Under the heavy-tailed betting-fraction prior the potential
is large exactly when the running sum leaves a sqrt(t * log log t)-shaped
envelope, which yields an explicit anytime deviation boundary; combining it
with the direction learner's pathwise regret bound lifts the boundary to
norms of vector-valued sums.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .direction import NormSpec
from .errors import LengthMismatch
from .noise import NoiseOracle
from .numerics import QuadratureSpec

__all__ = [
    "lil_boundary",
    "lil_potential",
    "lil_potential_grid",
    "doob_radius",
    "doob_coverage",
    "banach_deviation_bound",
    "banach_coverage",
]


def lil_boundary(t, delta: float, sigma_1d: float):
    """Anytime deviation envelope for |sum of coins| at confidence delta.

    sigma_1d * sqrt(2t * ln((6*pi*sqrt(e)/delta)^(3/2) * (ln^2(sqrt(t)) + 1))),
    vectorized over t.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")
    if not sigma_1d > 0:
        raise ValueError("sigma_1d must be > 0")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 1):
        raise ValueError("t must be >= 1")
    A = (6.0 * math.pi * math.sqrt(math.e) / delta) ** 1.5
    lnsqrt = 0.5 * np.log(t_arr)
    out = sigma_1d * np.sqrt(2.0 * t_arr * np.log(A * (lnsqrt**2 + 1.0)))
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def lil_potential(
    x: float, t: int, sigma_1d: float, spec: QuadratureSpec = QuadratureSpec()
) -> float:
    """Potential F_t(x) under the heavy-tailed prior, endowment 1, zero-mean coins.

    The mixture runs over the full line with discount exp(-beta^2 * t *
    sigma_1d^2 / 2); evaluated by adaptive quadrature in u = ln(sigma_1d*|beta|)
    coordinates where the prior is a standard Cauchy density.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    from .betting import _lil_mixture

    return _lil_mixture(float(x), t * sigma_1d**2 / 2.0, sigma_1d, spec)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    if nodes not in _GL_CACHE:
        _GL_CACHE[nodes] = np.polynomial.legendre.leggauss(nodes)
    return _GL_CACHE[nodes]


def lil_potential_grid(x, v, sigma_1d: float, panels: int = 10, nodes: int = 64):
    """Vectorized F(x; v) = Int exp(beta*x - beta^2*v) dprior, v = t*sigma_1d^2/2.

    Same tail-plus-quadrature decomposition as :func:`lil_potential` but on
    fixed Gauss-Legendre panels so that whole arrays of (x, v) pairs evaluate
    at once.  Agreement with the adaptive path is covered by tests; the
    default resolution is conservative, root-solving uses a coarser one.
    """
    x_arr, v_arr = np.broadcast_arrays(
        np.atleast_1d(np.asarray(x, dtype=float)), np.atleast_1d(np.asarray(v, dtype=float))
    )
    ax = np.abs(x_arr)
    if np.any(v_arr <= 0):
        raise ValueError("v must be > 0")
    gl_nodes, gl_weights = _gl(nodes)
    peak = ax / (2.0 * v_arr)
    phimax = np.maximum(ax * peak - peak**2 * v_arr, 0.0)
    beta_hi = (ax + np.sqrt(ax * ax + 4.0 * v_arr * (phimax + 45.0))) / (2.0 * v_arr)
    beta_lo = np.minimum(1e-9 / (ax + np.sqrt(v_arr) + 1.0), beta_hi / 10.0)
    u_lo = np.log(sigma_1d * beta_lo)
    u_hi = np.log(sigma_1d * beta_hi)
    tail = 0.5 + np.arctan(u_lo) / np.pi

    edges = np.linspace(0.0, 1.0, panels + 1)
    lo = u_lo[..., None]
    width = (u_hi - u_lo)[..., None]
    panel_edges = lo + width * edges  # (..., P+1)
    a_e = panel_edges[..., :-1]
    b_e = panel_edges[..., 1:]
    mid = 0.5 * (a_e + b_e)[..., None]
    half = 0.5 * (b_e - a_e)[..., None]
    u = mid + half * gl_nodes  # (..., P, N)
    beta = np.exp(u) / sigma_1d
    expo_p = beta * ax[..., None, None] - beta**2 * v_arr[..., None, None] - phimax[..., None, None]
    expo_m = -beta * ax[..., None, None] - beta**2 * v_arr[..., None, None] - phimax[..., None, None]
    body = (np.exp(expo_p) + np.exp(expo_m)) / (2.0 * np.pi * (u * u + 1.0))
    vals = np.sum(body * gl_weights, axis=-1) * half[..., 0]
    val = np.exp(phimax) * np.sum(vals, axis=-1) + tail
    return val.reshape(np.broadcast(np.asarray(x), np.asarray(v)).shape) if np.ndim(x) or np.ndim(v) else float(val[0])


def doob_radius(t, delta: float, sigma_1d: float) -> np.ndarray:
    """Per-round radius r_t with F_t(r_t) = 1/delta; the potential is even and
    increasing in |x|, so a path crosses the potential threshold exactly when
    |running sum| >= r_t.  Vectorized bisection across all t at once."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    v = t_arr * sigma_1d**2 / 2.0
    target = 1.0 / delta
    lo = np.zeros_like(v)
    hi = lil_boundary(t_arr, delta, sigma_1d) * 2.0 + 10.0 * sigma_1d
    grid = dict(panels=6, nodes=24)
    # expand until the bracket covers the threshold everywhere
    for _ in range(60):
        low_mask = lil_potential_grid(hi, v, sigma_1d, **grid) < target
        if not np.any(low_mask):
            break
        hi = np.where(low_mask, hi * 1.5, hi)
    for _ in range(52):
        mid = 0.5 * (lo + hi)
        below = lil_potential_grid(mid, v, sigma_1d, **grid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def doob_coverage(
    paths: int,
    T: int,
    delta: float,
    oracle: NoiseOracle,
    radii: np.ndarray | None = None,
) -> float:
    """Fraction of simulated zero-mean paths whose potential ever reaches 1/delta.

    The oracle must be sub-Gaussian (b = 0) and one-dimensional; the maximal
    inequality promises the fraction stays below delta in expectation.
    """
    spec = oracle.spec()
    if spec.b != 0.0:
        raise ValueError("the maximal inequality here needs a sub-Gaussian oracle (b = 0)")
    if oracle.d != 1:
        raise ValueError("scalar paths only")
    sigma_1d = math.sqrt(spec.sigma2_1d)
    if sigma_1d == 0.0:
        return 0.0 if delta < 1.0 else 1.0
    if radii is None:
        radii = doob_radius(np.arange(1, T + 1), delta, sigma_1d)
    hits = 0
    for _ in range(paths):
        xs = np.cumsum(oracle.sample_block(T)[:, 0])
        if np.any(np.abs(xs) >= radii):
            hits += 1
    return hits / paths


def banach_deviation_bound(
    grad_log: Sequence[np.ndarray],
    inner_log: Sequence[float],
    norm: NormSpec,
    t: int,
    delta: float,
    sigma_1d: float,
) -> float:
    """Anytime bound on ||sum of gradients||_q along a reduction run.

    sqrt((2/lam) * sum ||g_hat||_q^2) + the scalar deviation envelope at time
    t.  ``inner_log`` holds the scalar coins <g_hat_s, y_s> fed to the bettor
    and must align with ``grad_log``.
    """
    grads = list(grad_log)
    inners = list(inner_log)
    if len(grads) != len(inners) or len(grads) != t:
        raise LengthMismatch(
            f"got {len(grads)} gradients, {len(inners)} inner products for t={t}"
        )
    gsq = sum(np.linalg.norm(np.asarray(g, dtype=float), ord=norm.q) ** 2 for g in grads)
    return math.sqrt(2.0 / norm.lam * gsq) + lil_boundary(t, delta, sigma_1d)


def banach_coverage(
    paths: int,
    T: int,
    delta: float,
    oracle: NoiseOracle,
    norm: NormSpec,
) -> float:
    """Fraction of vector-noise paths with max_t ||sum g_hat||_q above the bound."""
    spec = oracle.spec()
    sigma_1d = math.sqrt(spec.sigma2_1d)
    envelope = lil_boundary(np.arange(1, T + 1), delta, sigma_1d)
    hits = 0
    for _ in range(paths):
        g = oracle.sample_block(T)
        cums = np.cumsum(g, axis=0)
        lhs = np.linalg.norm(cums, ord=norm.q, axis=1)
        gsq = np.cumsum(np.linalg.norm(g, ord=norm.q, axis=1) ** 2)
        rhs = np.sqrt(2.0 / norm.lam * gsq) + envelope
        if np.any(lhs >= rhs):
            hits += 1
    return hits / paths

"""Special functions and solvers used by the betting core.

The error functions are delegated to scipy's Cephes/Faddeeva implementations,
which deliver near machine precision and a scaled variant that avoids the
overflow of ``exp(x**2) * erfc(x)`` at large arguments.  The adaptive
quadrature wraps ``scipy.integrate.quad`` behind an explicit tolerance spec
and a hard failure mode; it is the oracle used for integral potentials under
arbitrary priors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from scipy import integrate as _integrate
from scipy import special as _special

from .errors import NonConvergence

__all__ = ["QuadratureSpec", "erf", "erfc", "erfcx", "solve_k1", "integrate"]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for adaptive quadrature."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be strictly positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


def erf(x):
    """Error function; accepts scalars or arrays, odd and bounded in (-1, 1)."""
    return _special.erf(x)


def erfc(x):
    """Complementary error function 1 - erf(x)."""
    return _special.erfc(x)


def erfcx(x):
    """Scaled complementary error function exp(x**2) * erfc(x).

    Decays like 1/(x*sqrt(pi)) for large positive x, which is what makes the
    closed-form bet evaluable without overflow.
    """
    return _special.erfcx(x)


def _k1_residual(k: float) -> float:
    return 1.0 - k - math.exp(-k - k * k)


@lru_cache(maxsize=1)
def solve_k1() -> float:
    """Root of 1 - k = exp(-k - k^2) in (0, 1).

    This constant bounds the betting fractions for which a coin with mean in
    [-G, G] still satisfies the one-round betting inequality.  Bisection on
    [0.5, 0.9] brackets the root, then Newton polishes to machine precision.
    """
    lo, hi = 0.5, 0.9
    flo = _k1_residual(lo)
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        fmid = _k1_residual(mid)
        if flo * fmid > 0:
            lo, flo = mid, fmid
        else:
            hi = mid
    k = 0.5 * (lo + hi)
    for _ in range(8):
        f = _k1_residual(k)
        fp = -1.0 + (1.0 + 2.0 * k) * math.exp(-k - k * k)
        step = f / fp
        k -= step
        if abs(step) < 1e-16:
            break
    return k


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    spec: QuadratureSpec = QuadratureSpec(),
    points: Sequence[float] | None = None,
) -> float:
    """Adaptive quadrature of ``f`` over ``[lo, hi]`` (infinite limits allowed).

    ``points`` hints interior features (peaks, kinks) for finite intervals.
    Raises :class:`NonConvergence` when the subdivision budget runs out or the
    reported error estimate misses the requested tolerances.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    kwargs = {}
    finite = math.isfinite(lo) and math.isfinite(hi)
    if points is not None and finite:
        inner = [p for p in points if lo < p < hi]
        if inner:
            kwargs["points"] = sorted(set(inner))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        out = _integrate.quad(
            f,
            lo,
            hi,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_subdivisions,
            full_output=1,
            **kwargs,
        )
    value, abserr = out[0], out[1]
    if len(out) > 3:  # scipy appends an explanation once the integrator gave up
        raise NonConvergence(f"quadrature did not converge: {out[3]}")
    if abserr > max(spec.abs_tol, spec.rel_tol * abs(value)) * 10.0:
        raise NonConvergence(
            f"quadrature error estimate {abserr:.3e} exceeds tolerance for value {value:.6e}"
        )
    return value

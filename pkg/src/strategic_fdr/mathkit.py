"""Self-contained numerical primitives.

Standard-normal CDF and quantile, Gauss-Legendre expectations under a
truncated normal, and deterministic bisection.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from statistics import NormalDist
from typing import Callable

import numpy as np

from .exceptions import BracketError, DegenerateSupportError, DomainError

_SQRT2 = math.sqrt(2.0)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_NORMAL = NormalDist()

DEFAULT_ROOT_TOL = 1e-10


@dataclass(frozen=True)
class Interval:
    """Closed finite interval ``[lo, hi]`` with ``lo < hi``."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"interval endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise DomainError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate to ~1e-16 absolute via ``erfc``."""
    if not math.isfinite(x):
        raise DomainError(f"std_normal_cdf needs a finite argument, got {x}")
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_sf(x: float) -> float:
    """Upper tail ``1 - cdf(x)`` without cancellation."""
    if not math.isfinite(x):
        raise DomainError(f"std_normal_sf needs a finite argument, got {x}")
    return 0.5 * math.erfc(x / _SQRT2)


def std_normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x - _LOG_SQRT_2PI)


def _lower_quantile(q: float) -> float:
    # q in (0, 0.5]; the CDF is relatively accurate in the lower tail so a
    # Newton correction cannot lose precision here.
    x = _NORMAL.inv_cdf(q)
    pdf = std_normal_pdf(x)
    if pdf > 0.0:
        x -= (std_normal_cdf(x) - q) / pdf
    return x


def std_normal_quantile(p: float) -> float:
    """Inverse of :func:`std_normal_cdf` on the open unit interval.

    Uses the Wichura rational approximation from :mod:`statistics` as the
    initial guess, then one Newton step. Upper-tail probabilities are
    reflected (``1 - p`` is exact for ``p >= 0.5``) so the Newton residual
    is always formed in the accurate lower tail.
    """
    if not (isinstance(p, (int, float)) and 0.0 < p < 1.0):
        raise DomainError(f"std_normal_quantile needs p in (0, 1), got {p}")
    if p > 0.5:
        return -_lower_quantile(1.0 - p)
    return _lower_quantile(p)


@lru_cache(maxsize=16)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _eval(f: Callable[[float], float], xs: np.ndarray) -> np.ndarray:
    return np.fromiter((f(float(x)) for x in xs), dtype=float, count=len(xs))


def truncnorm_mass(mu: float, sigma: float, support: Interval) -> float:
    """Probability that ``N(mu, sigma^2)`` falls inside ``support``."""
    a = (support.lo - mu) / sigma
    b = (support.hi - mu) / sigma
    if a > 0.0:
        # both endpoints in the upper tail: difference of survival functions
        return std_normal_sf(a) - std_normal_sf(b)
    return std_normal_cdf(b) - std_normal_cdf(a)


def truncnorm_expect(
    f: Callable[[float], float],
    mu: float,
    sigma: float,
    support: Interval,
    *,
    rtol: float = 1e-10,
    min_nodes: int = 128,
    max_nodes: int = 4096,
) -> float:
    """Expectation of ``f(R)`` for ``R ~ TN(mu, sigma, [lo, hi])``.

    ``sigma`` is the standard deviation of the parent normal. The integral
    is computed with Gauss-Legendre quadrature on the truncation interval,
    doubling the node count until two successive estimates agree to
    ``rtol`` relative to ``E|f(R)|``.
    """
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise DomainError(f"sigma must be positive and finite, got {sigma}")
    if not math.isfinite(mu):
        raise DomainError(f"mu must be finite, got {mu}")
    mass = truncnorm_mass(mu, sigma, support)
    if not mass >= 1e-300:
        raise DegenerateSupportError(
            f"TN({mu}, {sigma}, [{support.lo}, {support.hi}]) has mass {mass:.3g}"
        )
    log_norm = math.log(sigma) + _LOG_SQRT_2PI + math.log(mass)
    half = 0.5 * support.width
    mid = 0.5 * (support.lo + support.hi)

    def estimate(n: int) -> tuple[float, float]:
        t, w = _gauss_legendre(n)
        xs = mid + half * t
        z = (xs - mu) / sigma
        dens = np.exp(-0.5 * z * z - log_norm)
        vals = _eval(f, xs)
        wd = half * w * dens
        return float(np.dot(wd, vals)), float(np.dot(wd, np.abs(vals)))

    n = min_nodes
    prev, _ = estimate(n)
    while True:
        n *= 2
        cur, scale = estimate(n)
        if abs(cur - prev) <= rtol * max(scale, 1e-300):
            return cur
        if n >= max_nodes:
            warnings.warn(
                f"truncnorm_expect did not reach rtol={rtol} with {n} nodes "
                f"(last change {abs(cur - prev):.3g})",
                RuntimeWarning,
                stacklevel=2,
            )
            return cur
        prev = cur


def find_boundary(
    predicate: Callable[[float], bool],
    bracket: Interval,
    tol: float = DEFAULT_ROOT_TOL,
) -> float:
    """Bisect for the switch point of a monotone predicate.

    Requires ``predicate(lo)`` false and ``predicate(hi)`` true. Returns the
    upper end of the final bracket, i.e. a point where the predicate holds
    that is within ``tol`` of the switch.
    """
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    lo, hi = bracket.lo, bracket.hi
    if predicate(lo) or not predicate(hi):
        raise BracketError(f"predicate does not switch from False to True on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval reached float resolution
            break
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi


def find_root(
    f: Callable[[float], float],
    bracket: Interval,
    tol: float = DEFAULT_ROOT_TOL,
) -> float:
    """Bisection root of ``f`` on a sign-changing bracket.

    The returned point is the midpoint of a final bracket of width at most
    ``tol`` that still straddles the sign change.
    """
    flo, fhi = f(bracket.lo), f(bracket.hi)
    if flo == 0.0:
        return bracket.lo
    if fhi == 0.0:
        return bracket.hi
    if (flo < 0.0) == (fhi < 0.0) or math.isnan(flo) or math.isnan(fhi):
        raise BracketError(
            f"no sign change on [{bracket.lo}, {bracket.hi}]: f(lo)={flo}, f(hi)={fhi}"
        )
    hi_negative = fhi < 0.0
    lo, hi = bracket.lo, bracket.hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == hi_negative:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)

"""Principal utility and maximin-optimal thresholds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import BoundStatus, psi
from .exceptions import ModelError
from .mathkit import Interval, find_boundary
from .model import Scenario


@dataclass(frozen=True)
class PrincipalWeights:
    """Harm ``omega0`` of approving a null, benefit ``omega1`` of approving a non-null."""

    omega0: float
    omega1: float

    def __post_init__(self):
        if not (self.omega0 > 0.0 and self.omega1 > 0.0):
            raise ModelError(f"principal weights must be positive, got {self.omega0}, {self.omega1}")

    @property
    def target(self) -> float:
        """Break-even posterior null ``omega1 / (omega0 + omega1)``."""
        return self.omega1 / (self.omega0 + self.omega1)


def principal_utility(weights: PrincipalWeights, posterior_null: float, opted_in: bool) -> float:
    if not opted_in:
        return 0.0
    return (weights.omega0 + weights.omega1) * (weights.target - posterior_null)


def worst_case_utility(scenario: Scenario, weights: PrincipalWeights, tau: float) -> float:
    """Infimum of principal utility over agent priors at ``tau``.

    Nobody opting in gives zero; otherwise the worst agent has posterior
    null equal to the sharp bound.
    """
    bound = psi(scenario, tau)
    if bound.status is BoundStatus.NO_OPT_IN:
        return 0.0
    return min(0.0, (weights.omega0 + weights.omega1) * (weights.target - bound.clamped))


def in_maximin_region(scenario: Scenario, weights: PrincipalWeights, tau: float) -> bool:
    bound = psi(scenario, tau)
    return bound.status is BoundStatus.NO_OPT_IN or bound.clamped <= weights.target


@dataclass(frozen=True)
class MaximinResult:
    tau_max: float
    target: float
    taus: np.ndarray
    in_region: np.ndarray

    @property
    def region(self) -> np.ndarray:
        return self.taus[self.in_region]


def maximin_region(
    scenario: Scenario,
    weights: PrincipalWeights,
    grid: int = 10_000,
    tol: float = 1e-12,
) -> MaximinResult:
    """Scan a threshold grid for maximin optimality, refining the largest one.

    The bound is not assumed monotone in ``tau``, so the whole grid is
    scanned; bisection is applied only between the largest optimal grid
    point and its successor.
    """
    if grid < 2:
        raise ModelError("grid needs at least two points")
    taus = np.linspace(0.0, 1.0, grid + 1)
    mask = np.array([in_maximin_region(scenario, weights, float(t)) for t in taus])
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        return MaximinResult(float("nan"), weights.target, taus, mask)
    k = int(hits[-1])
    if k == len(taus) - 1:
        return MaximinResult(1.0, weights.target, taus, mask)
    lo, hi = float(taus[k]), float(taus[k + 1])
    # boundary search on "outside the region", then step back inside
    edge = find_boundary(
        lambda t: not in_maximin_region(scenario, weights, t), Interval(lo, hi), tol
    )
    tau_max = max(lo, edge - tol)
    while tau_max > lo and not in_maximin_region(scenario, weights, tau_max):
        tau_max = max(lo, tau_max - tol)
    return MaximinResult(tau_max, weights.target, taus, mask)

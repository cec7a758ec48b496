"""Agent-side calculus: utility differences and the opt-in decision.

The expected utility of opting in is affine in the prior null probability
``pi0``::

    l(pi0) = pi0 * (b0*D0 - b1*D1) + u(W0 - c) + b1*D1

with ``b_j`` the approval probabilities, ``D_j`` the expected utility gain
of approval over denial under hypothesis ``j`` and ``L = u(W0) - u(W0 - c)``.
An agent opts in iff ``l(pi0) >= u(W0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .mathkit import Interval, find_boundary
from .model import ConstantReward, RewardDist, Scenario

# Relative slack for the opt-in tie. Worst-case priors sit exactly on the
# decision boundary, where the margin is zero up to rounding.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class UtilityDeltas:
    """Utility gains ``delta0``/``delta1`` of approval and loss ``loss`` of denial."""

    delta0: float
    delta1: float
    loss: float


def _gain(scenario: Scenario, dist: RewardDist) -> float:
    u = scenario.utility
    base_wealth = scenario.wealth0 - scenario.cost
    base = u(base_wealth)
    if isinstance(dist, ConstantReward):
        return u(base_wealth + dist.value) - base
    # integrate the difference directly so the large common level cancels
    # before quadrature rather than after
    return dist.expect(lambda r: u(base_wealth + r) - base)


@lru_cache(maxsize=512)
def utility_deltas(scenario: Scenario) -> UtilityDeltas:
    """``D_j = E[u(W0 + R - c) | j] - u(W0 - c)`` and ``L = u(W0) - u(W0 - c)``."""
    u = scenario.utility
    loss = u(scenario.wealth0) - u(scenario.wealth0 - scenario.cost)
    return UtilityDeltas(
        delta0=float(_gain(scenario, scenario.rewards.null)),
        delta1=float(_gain(scenario, scenario.rewards.alt)),
        loss=float(loss),
    )


def optin_margin(scenario: Scenario, prior_null: float, tau: float) -> float:
    """``l(pi0) - u(W0)``, assembled from differences to avoid cancellation."""
    b0, b1 = scenario.power(tau)
    d = utility_deltas(scenario)
    return (1.0 - prior_null) * b1 * d.delta1 + prior_null * b0 * d.delta0 - d.loss


def expected_optin_utility(scenario: Scenario, prior_null: float, tau: float) -> float:
    b0, b1 = scenario.power(tau)
    d = utility_deltas(scenario)
    slope = b0 * d.delta0 - b1 * d.delta1
    u_denied = scenario.utility(scenario.wealth0 - scenario.cost)
    return prior_null * slope + (u_denied + b1 * d.delta1)


def opts_in(scenario: Scenario, prior_null: float, tau: float) -> bool:
    """Whether a utility maximiser with this prior runs the trial; ties opt in."""
    b0, b1 = scenario.power(tau)
    d = utility_deltas(scenario)
    margin = (1.0 - prior_null) * b1 * d.delta1 + prior_null * b0 * d.delta0 - d.loss
    scale = max(b1 * d.delta1, d.loss)
    return margin >= -TIE_RTOL * scale


def optin_threshold(scenario: Scenario, prior_null: float, tol: float = 1e-12) -> float | None:
    """Smallest threshold at which the agent opts in, or ``None`` if none does.

    Relies on the opt-in margin being non-decreasing in ``tau``.
    """
    if not opts_in(scenario, prior_null, 1.0):
        return None
    if opts_in(scenario, prior_null, 0.0):
        return 0.0
    return find_boundary(lambda t: opts_in(scenario, prior_null, t), Interval(0.0, 1.0), tol)

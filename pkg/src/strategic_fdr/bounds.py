"""Analytic bounds on the prior null probability and on the Bayes FDR.

The formulas take plain scalars (approval probabilities and utility
differences) so composite tests can feed prior-averaged quantities
directly. Scenario-level helpers at the bottom evaluate them along a
threshold sweep.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .agent import UtilityDeltas, utility_deltas
from .exceptions import BoundAssumptionError, EnvelopeError, PowerAssumptionError
from .model import Scenario, reward_mean

_TINY = 1e-300


class BoundStatus(str, enum.Enum):
    NO_OPT_IN = "NoOptInRegion"
    VALID = "Valid"
    VACUOUS = "Vacuous"


@dataclass(frozen=True)
class BoundResult:
    """Raw bound value, its clamp to [0, 1], and what the raw value means.

    A negative raw value means even the ideal agent (prior null 0) stays
    out; a value at or above one means no non-trivial control.
    """

    value: float
    clamped: float
    status: BoundStatus

    @classmethod
    def from_value(cls, value: float) -> "BoundResult":
        value = float(value)
        if value < 0.0:
            status = BoundStatus.NO_OPT_IN
        elif value >= 1.0:
            status = BoundStatus.VACUOUS
        else:
            status = BoundStatus.VALID
        return cls(value, min(max(value, 0.0), 1.0), status)

    @property
    def is_valid(self) -> bool:
        return self.status is BoundStatus.VALID


def _check_deltas(d: UtilityDeltas) -> None:
    if d.loss < 0.0 or d.delta0 < 0.0 or d.delta1 < d.delta0:
        raise BoundAssumptionError(
            f"need delta1 >= delta0 >= 0 and loss >= 0, got {d}"
        )


def prior_bound_known(beta0: float, beta1: float, deltas: UtilityDeltas) -> BoundResult:
    """Largest prior null consistent with opting in, given the true power."""
    if not beta1 > beta0:
        raise PowerAssumptionError(f"need beta1 > beta0, got beta1={beta1}, beta0={beta0}")
    _check_deltas(deltas)
    gain1 = beta1 * deltas.delta1
    den = gain1 - beta0 * deltas.delta0
    if not den > _TINY:
        raise BoundAssumptionError(f"degenerate denominator {den}")
    return BoundResult.from_value((gain1 - deltas.loss) / den)


def prior_bound_envelope(tau: float, kappa: float, deltas: UtilityDeltas) -> BoundResult:
    """Prior-null bound using ``tau >= beta0`` and an envelope ``kappa >= beta1``."""
    if not 0.0 < kappa <= 1.0:
        raise EnvelopeError(f"kappa must lie in (0, 1], got {kappa}")
    if kappa < tau:
        raise EnvelopeError(f"envelope kappa={kappa} below threshold tau={tau}")
    _check_deltas(deltas)
    gain1 = kappa * deltas.delta1
    den = gain1 - tau * deltas.delta0
    if not den > _TINY:
        raise BoundAssumptionError(f"degenerate denominator {den}")
    return BoundResult.from_value((gain1 - deltas.loss) / den)


def _fdr_formula(b0: float, b1: float, d: UtilityDeltas) -> float:
    if b0 == 0.0:
        # nulls are never approved, so the posterior null is exactly zero
        return 0.0
    num = b1 * d.delta1 - d.loss
    den = (b1 - b0) * d.loss + b0 * b1 * (d.delta1 - d.delta0)
    if not den > _TINY:
        raise BoundAssumptionError(f"degenerate denominator {den} (beta0={b0}, beta1={b1})")
    return b0 * num / den


def fdr_bound_known(beta0: float, beta1: float, deltas: UtilityDeltas) -> BoundResult:
    """Sharp Bayes-FDR bound for agents who opt in, with known power.

    ``beta0 * (beta1*D1 - L) / ((beta1 - beta0)*L + beta0*beta1*(D1 - D0))``.
    The raw value reaches one exactly when ``beta0 = L / D0``; beyond that
    even a certainly-null agent opts in and the status is ``Vacuous``.
    """
    if beta1 < beta0:
        raise PowerAssumptionError(f"need beta1 >= beta0, got beta1={beta1}, beta0={beta0}")
    _check_deltas(deltas)
    return BoundResult.from_value(_fdr_formula(beta0, beta1, deltas))


def fdr_bound_conservative(tau: float, kappa: float, deltas_bar: UtilityDeltas) -> BoundResult:
    """Bound needing only ``tau``, an envelope ``kappa`` and mean-reward deltas."""
    if not 0.0 < kappa <= 1.0:
        raise EnvelopeError(f"kappa must lie in (0, 1], got {kappa}")
    if kappa < tau:
        raise EnvelopeError(f"envelope kappa={kappa} below threshold tau={tau}")
    _check_deltas(deltas_bar)
    return BoundResult.from_value(_fdr_formula(tau, kappa, deltas_bar))


def bates_bound(tau: float, reward: float, cost: float) -> BoundResult:
    """Earlier risk-neutral bound ``tau * R / c``."""
    if not cost > 0.0:
        raise BoundAssumptionError(f"cost must be positive, got {cost}")
    return BoundResult.from_value(tau * reward / cost)


# ---------------------------------------------------------------------------
# Scenario-level helpers
# ---------------------------------------------------------------------------


def mean_reward_deltas(scenario: Scenario) -> UtilityDeltas:
    """Deltas with each reward replaced by its mean: ``u(W0 + Rbar_j - c) - u(W0 - c)``.

    By Jensen these dominate the true deltas for concave utilities.
    """
    u = scenario.utility
    base = u(scenario.wealth0 - scenario.cost)
    r0 = reward_mean(scenario.rewards, "null")
    r1 = reward_mean(scenario.rewards, "alt")
    return UtilityDeltas(
        delta0=float(u(scenario.wealth0 + r0 - scenario.cost) - base),
        delta1=float(u(scenario.wealth0 + r1 - scenario.cost) - base),
        loss=float(u(scenario.wealth0) - base),
    )


def psi(scenario: Scenario, tau: float) -> BoundResult:
    """Known-power FDR bound for a scenario at threshold ``tau``.

    Also defined where the power assumption degenerates (``beta1 == beta0``,
    e.g. ``tau = 1`` for a Gaussian test). There every opting agent has FDR
    equal to its prior, so the bound is 1 if a certainly-null agent would
    opt in; if nobody opts in the raw value is the negative relative margin
    ``(beta1*D1 - L) / L``.
    """
    b0, b1 = scenario.power(tau)
    d = utility_deltas(scenario)
    try:
        return fdr_bound_known(b0, b1, d)
    except BoundAssumptionError:
        if b1 > b0 or d.loss <= 0.0:
            raise
    if b0 * d.delta0 >= d.loss:
        return BoundResult.from_value(1.0)
    return BoundResult.from_value(min(0.0, (b1 * d.delta1 - d.loss) / d.loss))


def conservative_bound(scenario: Scenario, tau: float, kappa: float = 1.0) -> BoundResult:
    """Unknown-power bound for a scenario, default envelope ``kappa = 1``."""
    d = mean_reward_deltas(scenario)
    try:
        return fdr_bound_conservative(tau, kappa, d)
    except BoundAssumptionError:
        if tau != kappa:
            raise
    # tau == kappa with equal deltas: every opting agent's FDR is its prior
    return BoundResult.from_value(1.0 if tau * d.delta0 >= d.loss else min(0.0, (tau * d.delta1 - d.loss) / d.loss))


def scenario_bates_bound(scenario: Scenario, tau: float) -> BoundResult:
    """Earlier bound with the non-null mean reward as ``R``."""
    return bates_bound(tau, reward_mean(scenario.rewards, "alt"), scenario.cost)


def valid_region_contains(scenario: Scenario, tau: float) -> bool:
    """Whether ``0 < beta0(tau) < L / D0`` and the ideal agent opts in."""
    b0, b1 = scenario.power(tau)
    d = utility_deltas(scenario)
    upper = math.inf if d.delta0 == 0.0 else d.loss / d.delta0
    return 0.0 < b0 < upper and b1 > b0 and b1 * d.delta1 >= d.loss

"""Exact Bayes FDR for agent populations and the staircase constructions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .agent import opts_in, utility_deltas
from .bounds import fdr_bound_known
from .exceptions import InfeasibleEpsilonError, ModelError, RegionError, UndefinedPosteriorError
from .model import AgentMixture, Scenario


@dataclass(frozen=True)
class MixtureFdrTrace:
    """Population FDR at one threshold; ``fdr`` is 0 when nobody opts in."""

    tau: float
    fdr: float
    optin_mass: float
    optin_types: tuple[int, ...]


def exact_fdr_single(prior_null: float, beta0: float, beta1: float) -> float:
    """Posterior null probability given approval, for one agent type."""
    num = prior_null * beta0
    den = num + (1.0 - prior_null) * beta1
    if not den > 0.0:
        raise UndefinedPosteriorError(
            f"approval has zero probability (prior_null={prior_null}, beta0={beta0}, beta1={beta1})"
        )
    return num / den


def optin_indicators(scenario: Scenario, mixture: AgentMixture, tau: float) -> np.ndarray:
    return np.array([opts_in(scenario, t.prior_null, tau) for t in mixture.types], dtype=bool)


def mixture_fdr(scenario: Scenario, mixture: AgentMixture, tau: float) -> MixtureFdrTrace:
    """Opt-in-weighted average of the per-type Bayes FDR."""
    b0, b1 = scenario.power(tau)
    active = optin_indicators(scenario, mixture, tau)
    idx = tuple(int(i) for i in np.flatnonzero(active))
    weights = mixture.weights
    mass = math.fsum(weights[i] for i in idx)
    if not idx or mass == 0.0:
        return MixtureFdrTrace(tau, 0.0, 0.0, idx)
    total = math.fsum(
        weights[i] * exact_fdr_single(mixture.types[i].prior_null, b0, b1) for i in idx
    )
    return MixtureFdrTrace(tau, total / mass, mass, idx)


def pooled_fdr(scenario: Scenario, mixture: AgentMixture, tau: float) -> float:
    """Fraction of all approvals that are null, pooling the opt-in population.

    Differs from :func:`mixture_fdr`, which weights each type by its opt-in
    share rather than by its share of approvals.
    """
    b0, b1 = scenario.power(tau)
    active = optin_indicators(scenario, mixture, tau)
    num = den = 0.0
    for t, on in zip(mixture.types, active):
        if on:
            num += t.weight * t.prior_null * b0
            den += t.weight * (t.prior_null * b0 + (1.0 - t.prior_null) * b1)
    return num / den if den > 0.0 else 0.0


def worstcase_prior(scenario: Scenario, tau: float) -> float:
    """Prior null that makes the opt-in condition an equality at ``tau``.

    Requires ``0 < beta0(tau) < L / D0`` and that the ideal agent opts in.
    """
    b0, b1 = scenario.power(tau)
    d = utility_deltas(scenario)
    upper = math.inf if d.delta0 == 0.0 else d.loss / d.delta0
    if not (0.0 < b0 < upper):
        raise RegionError(f"beta0({tau})={b0} outside (0, L/D0={upper})")
    gain1 = b1 * d.delta1
    den = gain1 - b0 * d.delta0
    if not (b1 > b0 and den > 0.0):
        raise RegionError(f"non-trivial power fails at tau={tau}")
    num = gain1 - d.loss
    if num < 0.0:
        raise RegionError(f"no agent opts in at tau={tau}")
    return num / den


def staircase_weights(psi_values: Sequence[float], epsilon: float) -> np.ndarray:
    """Unnormalized weights ``w1 = 1``, ``w_i = (sum_{j<i} w_j) (Psi_i - eps) / eps``."""
    if not epsilon > 0.0:
        raise InfeasibleEpsilonError(f"epsilon must be positive, got {epsilon}")
    psis = np.asarray(psi_values, dtype=float)
    if np.any(psis <= epsilon):
        raise InfeasibleEpsilonError(
            f"epsilon={epsilon} must be below every bound value (min {psis.min():.6g})"
        )
    w = np.empty(len(psis))
    w[0] = 1.0
    running = 1.0
    for i in range(1, len(psis)):
        w[i] = running * (psis[i] - epsilon) / epsilon
        running += w[i]
    return w


def staircase_mixture(scenario: Scenario, thresholds: Sequence[float], epsilon: float) -> AgentMixture:
    """Mixture that is exact at ``thresholds[0]`` and eps-tight at the rest.

    Type ``i`` is the worst-case agent for ``thresholds[i]``; weights make it
    dominate the opt-in population there.
    """
    taus = [float(t) for t in thresholds]
    if not taus:
        raise ModelError("need at least one threshold")
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise ModelError("thresholds must be strictly increasing")
    priors = [worstcase_prior(scenario, t) for t in taus]
    psis = [fdr_bound_known(*scenario.power(t), utility_deltas(scenario)).value for t in taus]
    weights = staircase_weights(psis, epsilon)
    return AgentMixture.from_unnormalized(priors, weights)


def ratio_weights(k: int, ratio: float) -> np.ndarray:
    """Unnormalized weights with ``w_j / sum_{i<=j} w_i = ratio`` for ``j >= 2``."""
    if not 0.0 < ratio < 1.0:
        raise ModelError(f"ratio must lie in (0, 1), got {ratio}")
    if k < 1:
        raise ModelError("need at least one agent type")
    w = np.empty(k)
    w[0] = 1.0
    running = 1.0
    for j in range(1, k):
        w[j] = ratio * running / (1.0 - ratio)
        running += w[j]
    return w


def mixture_from_ratio(priors: Sequence[float], ratio: float) -> AgentMixture:
    """Each new (less confident) type is ``ratio`` of the opt-in population it joins."""
    priors = [float(p) for p in priors]
    if any(b <= a for a, b in zip(priors, priors[1:])):
        raise ModelError("priors must be strictly increasing")
    return AgentMixture.from_unnormalized(priors, ratio_weights(len(priors), ratio))

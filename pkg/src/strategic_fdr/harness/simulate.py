"""Monte-Carlo simulation of the full testing game.

Random numbers come from NumPy's ``Philox`` (4x64 counter-based) bit
generator and are consumed only through ``Generator.random``, whose
uint64 -> double mapping is fixed; all other draws are inverse transforms
of those uniforms. Output is therefore reproducible across platforms for a
given seed.

Per round, four uniform streams are drawn in order: agent type, latent
hypothesis, evidence, reward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ..agent import opts_in
from ..model import AgentMixture, ConstantReward, GaussianMeanTest, RewardDist, Scenario


@dataclass(frozen=True)
class SimResult:
    """Counts from ``n_rounds`` simulated agents.

    ``empirical_fdr`` pools all approvals. ``weighted_fdr`` averages the
    per-type FDR with opt-in shares as weights, which is the estimator of
    the population FDR reported by :func:`strategic_fdr.mixture.mixture_fdr`.
    """

    n_rounds: int
    n_optin: int
    n_approved: int
    n_false_approved: int
    empirical_fdr: float
    seed: int
    n_null_optin: int = 0
    weighted_fdr: float = 0.0
    weighted_fdr_se: float = 0.0
    mean_reward: float = 0.0

    @property
    def optin_rate(self) -> float:
        return self.n_optin / self.n_rounds

    @property
    def null_approval_rate(self) -> float:
        """Fraction of opted-in null rounds that were approved."""
        return self.n_false_approved / self.n_null_optin if self.n_null_optin else 0.0


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def sample_reward(dist: RewardDist, u: np.ndarray) -> np.ndarray:
    """Inverse-transform draws from a reward law."""
    if isinstance(dist, ConstantReward):
        return np.full(u.shape, dist.value)
    a = (dist.support.lo - dist.mu) / dist.sigma
    b = (dist.support.hi - dist.mu) / dist.sigma
    fa, fb = special.ndtr(a), special.ndtr(b)
    z = special.ndtri(fa + u * (fb - fa))
    return np.clip(dist.mu + dist.sigma * z, dist.support.lo, dist.support.hi)


def _approvals(scenario: Scenario, tau: float, is_null: np.ndarray, u: np.ndarray) -> np.ndarray:
    test = scenario.test
    if isinstance(test, GaussianMeanTest):
        theta = np.where(is_null, 0.0, test.theta1)
        z = theta + special.ndtri(u)
        x = special.ndtr(-z)  # p-value 1 - Phi(Z)
        return x <= tau
    # explicit tests carry only approval probabilities
    b0, b1 = scenario.power(tau)
    return u < np.where(is_null, b0, b1)


def simulate(scenario: Scenario, mixture: AgentMixture, tau: float, n: int, seed: int = 0) -> SimResult:
    """Play ``n`` independent rounds at threshold ``tau``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = make_rng(seed)
    u_type = rng.random(n)
    u_null = rng.random(n)
    u_evidence = rng.random(n)
    u_reward = rng.random(n)

    cum = np.cumsum(mixture.weights)
    types = np.minimum(np.searchsorted(cum, u_type * cum[-1], side="right"), len(mixture) - 1)
    is_null = u_null < mixture.priors[types]
    decisions = np.array([opts_in(scenario, p, tau) for p in mixture.priors], dtype=bool)
    optin = decisions[types]
    approved = optin & _approvals(scenario, tau, is_null, u_evidence)
    false_approved = approved & is_null

    # conditional independence: the reward stream never looks at the evidence
    rewards = np.where(
        is_null,
        sample_reward(scenario.rewards.null, u_reward),
        sample_reward(scenario.rewards.alt, u_reward),
    )

    n_approved = int(approved.sum())
    n_false = int(false_approved.sum())
    n_optin = int(optin.sum())
    weighted, se = _weighted_fdr(types, optin, approved, false_approved, len(mixture))
    return SimResult(
        n_rounds=n,
        n_optin=n_optin,
        n_approved=n_approved,
        n_false_approved=n_false,
        empirical_fdr=n_false / n_approved if n_approved else 0.0,
        seed=seed,
        n_null_optin=int((optin & is_null).sum()),
        weighted_fdr=weighted,
        weighted_fdr_se=se,
        mean_reward=float(rewards[approved].mean()) if n_approved else 0.0,
    )


def _weighted_fdr(types, optin, approved, false_approved, k) -> tuple[float, float]:
    m = np.bincount(types[optin], minlength=k).astype(float)
    a = np.bincount(types[approved], minlength=k).astype(float)
    f = np.bincount(types[false_approved], minlength=k).astype(float)
    total = m.sum()
    if total == 0:
        return 0.0, 0.0
    share = m / total
    phi = np.divide(f, a, out=np.zeros(k), where=a > 0)
    est = float(np.dot(share, phi))
    # delta method: binomial noise of each per-type FDR plus multinomial
    # noise of the opt-in shares
    var_phi = np.divide(phi * (1 - phi), a, out=np.zeros(k), where=a > 0)
    var = float(np.dot(share**2, var_phi)) + max(0.0, float(np.dot(share, phi**2)) - est**2) / total
    return est, math.sqrt(var)

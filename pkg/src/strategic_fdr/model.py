"""Domain types: utilities, reward laws, test power, scenarios, agent mixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence, Union

import numpy as np

from . import mathkit
from .exceptions import DomainError, ModelError, ModelInvariantError
from .mathkit import Interval

Hypothesis = Literal["null", "alt"]

_INVARIANT_SLACK = 1e-12


# ---------------------------------------------------------------------------
# Utilities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearUtility:
    """Risk-neutral utility ``u(w) = w``."""

    domain_lo = -math.inf

    def __call__(self, w):
        return w

    @property
    def name(self) -> str:
        return "linear"


@dataclass(frozen=True)
class CRRAUtility:
    """Constant relative risk aversion, ``u(w) = w**(1-gamma) / (1-gamma)``.

    Un-normalized: only utility differences enter any decision, so the
    additive constant that would make ``gamma -> 1`` continuous is omitted.
    Use :class:`LogUtility` for ``gamma == 1``.
    """

    gamma: float
    domain_lo = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and 0.0 <= self.gamma < 1.0):
            raise ModelError(f"CRRA requires 0 <= gamma < 1, got {self.gamma}; use LogUtility for 1")

    def __call__(self, w):
        if np.any(np.asarray(w) <= 0.0):
            raise DomainError(f"CRRA utility needs positive wealth, got {w}")
        p = 1.0 - self.gamma
        return np.power(w, p) / p if isinstance(w, np.ndarray) else w**p / p

    @property
    def name(self) -> str:
        return f"crra({self.gamma:g})"


@dataclass(frozen=True)
class LogUtility:
    """Logarithmic utility, the ``gamma = 1`` member of the CRRA family."""

    domain_lo = 0.0

    def __call__(self, w):
        if np.any(np.asarray(w) <= 0.0):
            raise DomainError(f"log utility needs positive wealth, got {w}")
        return np.log(w) if isinstance(w, np.ndarray) else math.log(w)

    @property
    def name(self) -> str:
        return "log"


UtilityModel = Union[LinearUtility, CRRAUtility, LogUtility]


def make_utility(kind: str, gamma: float | None = None) -> UtilityModel:
    """Build a utility from a config-style ``kind`` string."""
    kind = kind.lower()
    if kind == "linear":
        return LinearUtility()
    if kind == "log":
        return LogUtility()
    if kind == "crra":
        if gamma is None:
            raise ModelError("crra utility requires gamma")
        if gamma == 1.0:
            return LogUtility()
        return CRRAUtility(float(gamma))
    raise ModelError(f"unknown utility kind {kind!r}")


# ---------------------------------------------------------------------------
# Rewards
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantReward:
    value: float

    @property
    def lower(self) -> float:
        return self.value

    @property
    def upper(self) -> float:
        return self.value

    def mean(self) -> float:
        return self.value

    def expect(self, f: Callable[[float], float]) -> float:
        return f(self.value)

    def sf(self, r: float) -> float:
        """``P(R >= r)``."""
        return 1.0 if r <= self.value else 0.0


@dataclass(frozen=True)
class TruncNormalReward:
    """Normal(mu, sigma^2) conditioned on ``support``; sigma is the parent sd."""

    mu: float
    sigma: float
    support: Interval

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ModelError(f"sigma must be positive, got {self.sigma}")

    @property
    def lower(self) -> float:
        return self.support.lo

    @property
    def upper(self) -> float:
        return self.support.hi

    def expect(self, f: Callable[[float], float]) -> float:
        return mathkit.truncnorm_expect(f, self.mu, self.sigma, self.support)

    def mean(self) -> float:
        return self.expect(lambda r: r)

    def sf(self, r: float) -> float:
        if r <= self.support.lo:
            return 1.0
        if r > self.support.hi:
            return 0.0
        upper = Interval(r, self.support.hi) if r < self.support.hi else None
        if upper is None:
            return 0.0
        tail = mathkit.truncnorm_mass(self.mu, self.sigma, upper)
        return min(1.0, tail / mathkit.truncnorm_mass(self.mu, self.sigma, self.support))


RewardDist = Union[ConstantReward, TruncNormalReward]


@dataclass(frozen=True)
class RewardModel:
    """Reward law conditional on the proposal being null or non-null."""

    null: RewardDist
    alt: RewardDist

    def dist(self, hypothesis: Hypothesis) -> RewardDist:
        if hypothesis == "null":
            return self.null
        if hypothesis == "alt":
            return self.alt
        raise ValueError(f"hypothesis must be 'null' or 'alt', got {hypothesis!r}")

    @property
    def lower(self) -> float:
        return min(self.null.lower, self.alt.lower)

    def is_stochastically_monotone(self, n_grid: int = 1000) -> bool:
        """Survival-function dominance ``P0(R >= r) <= P1(R >= r)`` on a grid."""
        if isinstance(self.null, ConstantReward) and isinstance(self.alt, ConstantReward):
            return self.null.value <= self.alt.value
        lo = min(self.null.lower, self.alt.lower)
        hi = max(self.null.upper, self.alt.upper)
        grid = np.linspace(lo, hi, n_grid)
        # constants have atoms; probe them exactly as well
        extra = [d.value for d in (self.null, self.alt) if isinstance(d, ConstantReward)]
        for r in np.concatenate([grid, extra]):
            if self.null.sf(float(r)) > self.alt.sf(float(r)) + _INVARIANT_SLACK:
                return False
        return True


def reward_mean(rewards: RewardModel, hypothesis: Hypothesis) -> float:
    return rewards.dist(hypothesis).mean()


# ---------------------------------------------------------------------------
# Tests (power functions)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianMeanTest:
    """One-sided test of ``N(0,1)`` vs ``N(theta1,1)`` with p-value ``1 - Phi(Z)``.

    ``beta0(tau) = tau`` and ``beta1(tau) = Phi(theta1 + Phi^{-1}(tau))``.
    """

    theta1: float

    def __post_init__(self):
        if not (math.isfinite(self.theta1) and self.theta1 >= 0.0):
            raise ModelError(f"theta1 must be a finite non-negative shift, got {self.theta1}")

    def power(self, tau: float) -> tuple[float, float]:
        if tau <= 0.0:
            return 0.0, 0.0
        if tau >= 1.0:
            return 1.0, 1.0
        return tau, mathkit.std_normal_cdf(self.theta1 + mathkit.std_normal_quantile(tau))


@dataclass(frozen=True, eq=False)
class ExplicitTest:
    """Caller-supplied averaged approval probabilities.

    Covers composite hypotheses: ``beta0`` and ``beta1`` are the prior-
    averaged approval probabilities, or the supremum versions when used for
    maximin design. Invariants are checked at each queried threshold.
    """

    beta0: Callable[[float], float]
    beta1: Callable[[float], float]

    def power(self, tau: float) -> tuple[float, float]:
        b0 = float(self.beta0(tau))
        b1 = float(self.beta1(tau))
        if not (0.0 <= b0 <= 1.0 and 0.0 <= b1 <= 1.0):
            raise ModelInvariantError(f"approval probabilities out of [0,1] at tau={tau}: {b0}, {b1}")
        if b0 > tau + _INVARIANT_SLACK:
            raise ModelInvariantError(f"super-uniformity violated at tau={tau}: beta0={b0}")
        if 0.0 < tau < 1.0 and not b1 > b0:
            raise ModelInvariantError(f"non-trivial power violated at tau={tau}: beta1={b1} <= beta0={b0}")
        return b0, b1


class TabulatedTest(ExplicitTest):
    """Explicit test from tabulated curves, linearly interpolated in tau."""

    def __init__(self, taus: Sequence[float], beta0: Sequence[float], beta1: Sequence[float]):
        taus = np.asarray(taus, dtype=float)
        b0 = np.asarray(beta0, dtype=float)
        b1 = np.asarray(beta1, dtype=float)
        if not (taus.ndim == 1 and taus.shape == b0.shape == b1.shape and len(taus) >= 2):
            raise ModelError("tabulated test needs equal-length 1-D tau/beta0/beta1 arrays")
        if np.any(np.diff(taus) <= 0):
            raise ModelError("tabulated tau grid must be strictly increasing")
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "beta0_table", b0)
        object.__setattr__(self, "beta1_table", b1)
        super().__init__(
            beta0=lambda t: float(np.interp(t, taus, b0)),
            beta1=lambda t: float(np.interp(t, taus, b1)),
        )


TestModel = Union[GaussianMeanTest, ExplicitTest]


def power(test: TestModel, tau: float) -> tuple[float, float]:
    """Approval probabilities ``(beta0(tau), beta1(tau))``."""
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"tau must lie in [0, 1], got {tau}")
    return test.power(tau)


# ---------------------------------------------------------------------------
# Scenario and mixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    """Everything an agent needs to decide: wealth, cost, utility, rewards, test.

    Construction is permissive; use :func:`validate` to check assumptions.
    """

    wealth0: float
    cost: float
    utility: UtilityModel
    rewards: RewardModel
    test: TestModel

    def power(self, tau: float) -> tuple[float, float]:
        return power(self.test, tau)


@dataclass(frozen=True)
class AgentType:
    prior_null: float
    weight: float


@dataclass(frozen=True)
class AgentMixture:
    """Agent population: types differ only in prior null probability."""

    types: tuple[AgentType, ...]

    def __post_init__(self):
        types = tuple(self.types)
        object.__setattr__(self, "types", types)
        if not types:
            raise ModelError("mixture needs at least one agent type")
        for t in types:
            if not 0.0 <= t.prior_null <= 1.0:
                raise ModelError(f"prior_null must lie in [0,1], got {t.prior_null}")
            if not t.weight >= 0.0:
                raise ModelError(f"weights must be non-negative, got {t.weight}")
        total = math.fsum(t.weight for t in types)
        if abs(total - 1.0) > 1e-12:
            raise ModelError(f"weights must sum to 1 (got {total!r})")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, float]]) -> "AgentMixture":
        """Build from ``(prior_null, weight)`` pairs."""
        return cls(tuple(AgentType(float(p), float(w)) for p, w in pairs))

    @classmethod
    def from_unnormalized(cls, priors: Sequence[float], weights: Sequence[float]) -> "AgentMixture":
        weights = np.asarray(weights, dtype=float)
        total = math.fsum(weights)
        if not total > 0.0:
            raise ModelError("unnormalized weights must have positive sum")
        normed = [w / total for w in weights]
        # absorb the residual rounding into the largest weight
        k = int(np.argmax(normed))
        normed[k] += 1.0 - math.fsum(normed)
        return cls.from_pairs(list(zip(priors, normed)))

    @property
    def priors(self) -> np.ndarray:
        return np.array([t.prior_null for t in self.types])

    @property
    def weights(self) -> np.ndarray:
        return np.array([t.weight for t in self.types])

    def __len__(self) -> int:
        return len(self.types)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def format(self) -> str:
        return "\n".join(
            f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f": {c.detail}" if c.detail else "")
            for c in self.checks
        )


def validate(scenario: Scenario, n_tau: int = 201) -> ValidationReport:
    """Check the modelling assumptions; never raises for a bad scenario."""
    checks: list[Check] = []
    w0, c = scenario.wealth0, scenario.cost

    checks.append(Check("wealth_cost", w0 > c > 0.0, f"W0={w0:g}, c={c:g}"))

    lo_wealth = min(w0 - c, w0 + scenario.rewards.lower - c)
    dom = scenario.utility.domain_lo
    checks.append(
        Check(
            "utility_domain",
            lo_wealth > dom,
            f"lowest reachable wealth {lo_wealth:g} vs domain > {dom:g}",
        )
    )

    try:
        means = {h: reward_mean(scenario.rewards, h) for h in ("null", "alt")}
        ok = all(m >= c for m in means.values())
        checks.append(
            Check("non_dominating_cost", ok, f"E[R|null]={means['null']:g}, E[R|alt]={means['alt']:g}, c={c:g}")
        )
    except ModelError as exc:
        checks.append(Check("non_dominating_cost", False, str(exc)))

    checks.append(Check("stochastic_monotonicity", scenario.rewards.is_stochastically_monotone()))

    taus = np.linspace(0.0, 1.0, n_tau)
    try:
        betas = [scenario.power(float(t)) for t in taus]
        b0 = np.array([b[0] for b in betas])
        b1 = np.array([b[1] for b in betas])
        super_uniform = bool(np.all(b0 <= taus + _INVARIANT_SLACK))
        interior = slice(1, -1)
        nontrivial = bool(np.all(b1[interior] > b0[interior]))
        monotone = bool(np.all(np.diff(b0) >= -_INVARIANT_SLACK) and np.all(np.diff(b1) >= -_INVARIANT_SLACK))
        checks.append(Check("super_uniformity", super_uniform))
        checks.append(Check("nontrivial_power", nontrivial))
        checks.append(Check("power_monotone", monotone))
    except ModelError as exc:
        checks.append(Check("super_uniformity", False, str(exc)))
        checks.append(Check("nontrivial_power", False, str(exc)))

    return ValidationReport(tuple(checks))

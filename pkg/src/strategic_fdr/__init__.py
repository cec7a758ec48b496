"""Bayes false-discovery-rate bounds when agents choose whether to be tested.

An agent with a private prior on its own hypothesis pays a cost to run a
trial and collects a reward if the principal approves. Only agents whose
expected utility favours testing show up, so the approved population is
selected. This package computes the exact FDR of such populations, sharp
upper bounds on it, and thresholds that keep it under control.
"""

from .agent import (
    UtilityDeltas,
    expected_optin_utility,
    optin_margin,
    optin_threshold,
    opts_in,
    utility_deltas,
)
from .bounds import (
    BoundResult,
    BoundStatus,
    bates_bound,
    conservative_bound,
    fdr_bound_conservative,
    fdr_bound_known,
    prior_bound_envelope,
    prior_bound_known,
    psi,
)
from .exceptions import ModelError
from .mathkit import Interval
from .maximin import MaximinResult, PrincipalWeights, maximin_region, worst_case_utility
from .mixture import (
    exact_fdr_single,
    mixture_fdr,
    mixture_from_ratio,
    pooled_fdr,
    staircase_mixture,
    worstcase_prior,
)
from .model import (
    AgentMixture,
    AgentType,
    ConstantReward,
    CRRAUtility,
    ExplicitTest,
    GaussianMeanTest,
    LinearUtility,
    LogUtility,
    RewardModel,
    Scenario,
    TabulatedTest,
    TruncNormalReward,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AgentMixture",
    "AgentType",
    "BoundResult",
    "BoundStatus",
    "ConstantReward",
    "CRRAUtility",
    "ExplicitTest",
    "GaussianMeanTest",
    "Interval",
    "LinearUtility",
    "LogUtility",
    "MaximinResult",
    "ModelError",
    "PrincipalWeights",
    "RewardModel",
    "Scenario",
    "TabulatedTest",
    "TruncNormalReward",
    "UtilityDeltas",
    "bates_bound",
    "conservative_bound",
    "exact_fdr_single",
    "expected_optin_utility",
    "fdr_bound_conservative",
    "fdr_bound_known",
    "maximin_region",
    "mixture_fdr",
    "mixture_from_ratio",
    "optin_margin",
    "optin_threshold",
    "opts_in",
    "pooled_fdr",
    "prior_bound_envelope",
    "prior_bound_known",
    "psi",
    "staircase_mixture",
    "utility_deltas",
    "validate",
    "worst_case_utility",
    "worstcase_prior",
]

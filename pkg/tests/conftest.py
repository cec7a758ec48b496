import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from strategic_fdr import (  # noqa: E402
    AgentMixture,
    ConstantReward,
    CRRAUtility,
    GaussianMeanTest,
    Interval,
    LinearUtility,
    LogUtility,
    RewardModel,
    Scenario,
    TruncNormalReward,
)


def two_type_scenario(theta1=1.0, utility=None, wealth0=20.0, cost=10.0, r0=25.0, r1=25.0):
    return Scenario(
        wealth0=wealth0,
        cost=cost,
        utility=utility or LinearUtility(),
        rewards=RewardModel(ConstantReward(r0), ConstantReward(r1)),
        test=GaussianMeanTest(theta1),
    )


def tn_scenario(utility, null=(50.0, 35.0, 0.0, 100.0), alt=(150.0, 25.0, 120.0, 180.0), wealth0=200.0, cost=30.0):
    mk = lambda p: TruncNormalReward(p[0], p[1], Interval(p[2], p[3]))
    return Scenario(wealth0, cost, utility, RewardModel(mk(null), mk(alt)), GaussianMeanTest(1.0))


UTILITIES = {
    "linear": LinearUtility(),
    "crra035": CRRAUtility(0.35),
    "crra07": CRRAUtility(0.7),
    "log": LogUtility(),
}


@pytest.fixture
def two_type():
    return two_type_scenario()


@pytest.fixture
def two_type_mixture():
    return AgentMixture.from_pairs([(0.3, 0.1), (0.8, 0.9)])

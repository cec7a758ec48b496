import math

import numpy as np
import pytest

from strategic_fdr.agent import (
    UtilityDeltas,
    expected_optin_utility,
    optin_margin,
    optin_threshold,
    opts_in,
    utility_deltas,
)
from strategic_fdr.mathkit import Interval
from strategic_fdr.model import (
    ConstantReward,
    ExplicitTest,
    CRRAUtility,
    GaussianMeanTest,
    LinearUtility,
    LogUtility,
    RewardModel,
    Scenario,
    TruncNormalReward,
)

import oracles
from conftest import UTILITIES, tn_scenario, two_type_scenario

# frozen from oracles.py
THRESH = {0.0: 0.10503970659400668, 0.3: 0.16031259283103667, 0.8: 0.32347710196518248}
CRRA035_D0 = 40.058216849649204318
CRRA035_D1_24800 = 859.91691958026576990
CRRA035_L = 10.220581698196977555
BETA1_016 = 0.50221097339218349794
BETA1_005 = 0.25951102284144407937


def random_scenarios(n, seed):
    """Validated scenarios over utilities and both reward families."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        util = [LinearUtility(), CRRAUtility(float(rng.uniform(0.05, 0.95))), LogUtility()][rng.integers(3)]
        cost = float(rng.uniform(1, 20))
        w0 = cost + float(rng.uniform(1, 200))
        if rng.random() < 0.5:
            r0 = cost + float(rng.uniform(0, 30))
            rewards = RewardModel(ConstantReward(r0), ConstantReward(r0 + float(rng.uniform(0, 50))))
        else:
            mu0 = cost + float(rng.uniform(5, 30))
            sd = float(rng.uniform(1, 10))
            shift = float(rng.uniform(0, 40))
            rewards = RewardModel(
                TruncNormalReward(mu0, sd, Interval(mu0 - 5, mu0 + 5)),
                TruncNormalReward(mu0 + shift, sd, Interval(mu0 + shift - 5, mu0 + shift + 5)),
            )
        out.append(Scenario(w0, cost, util, rewards, GaussianMeanTest(float(rng.uniform(0.2, 3)))))
    return out


class TestUtilityDeltas:
    def test_linear_constant(self, two_type):
        assert utility_deltas(two_type) == UtilityDeltas(25.0, 25.0, 10.0)

    def test_crra_table_row(self):
        s = two_type_scenario(utility=CRRAUtility(0.35), wealth0=5000.0, cost=200.0, r0=800.0, r1=24800.0)
        d = utility_deltas(s)
        assert d.delta0 == pytest.approx(CRRA035_D0, rel=1e-12)
        assert d.delta1 == pytest.approx(CRRA035_D1_24800, rel=1e-12)
        assert d.loss == pytest.approx(CRRA035_L, rel=1e-12)

    def test_log_loss(self):
        d = utility_deltas(two_type_scenario(utility=LogUtility(), r0=17.0, r1=40.0))
        assert d.loss == pytest.approx(math.log(2), rel=1e-14)

    @pytest.mark.parametrize("name", sorted(UTILITIES))
    def test_truncnormal_against_mpmath(self, name):
        s = tn_scenario(UTILITIES[name])
        d = utility_deltas(s)
        kind, gamma = {"linear": ("linear", None), "crra035": ("crra", 0.35), "crra07": ("crra", 0.7), "log": ("log", None)}[name]
        ref = oracles.deltas(200, 30, oracles.utility(kind, gamma), (50, 35, 0, 100), (150, 25, 120, 180))
        assert d.delta0 == pytest.approx(float(ref[0]), rel=1e-10)
        assert d.delta1 == pytest.approx(float(ref[1]), rel=1e-10)
        assert d.loss == pytest.approx(float(ref[2]), rel=1e-12)

    def test_ordering_on_random_scenarios(self):
        for s in random_scenarios(60, 3):
            d = utility_deltas(s)
            assert d.loss >= 0 and d.delta1 >= d.delta0 - 1e-12 >= -1e-12

    @pytest.mark.parametrize("gamma", [0.35, 0.7])
    def test_risk_premium_reduces_gains(self, gamma):
        tn = tn_scenario(CRRAUtility(gamma))
        mean_matched = two_type_scenario(utility=CRRAUtility(gamma), wealth0=200.0, cost=30.0, r0=50.0, r1=150.0)
        a, b = utility_deltas(tn), utility_deltas(mean_matched)
        assert a.delta0 < b.delta0 and a.delta1 < b.delta1

    def test_risk_neutral_no_premium(self):
        a = utility_deltas(tn_scenario(LinearUtility()))
        assert a.delta0 == pytest.approx(50.0, rel=1e-12)
        assert a.delta1 == pytest.approx(150.0, rel=1e-12)


class TestExpectedUtility:
    def test_ideal_agent(self, two_type):
        assert expected_optin_utility(two_type, 0.0, 0.16) == pytest.approx(10 + BETA1_016 * 25, abs=1e-10)

    def test_certain_null(self, two_type):
        assert expected_optin_utility(two_type, 1.0, 0.16) == pytest.approx(14.0, abs=1e-12)

    def test_never_approved(self, two_type):
        assert expected_optin_utility(two_type, 0.0, 0.0) == 10.0

    def test_matches_cellwise_expectation(self):
        for s in random_scenarios(20, 5):
            for prior in (0.0, 0.37, 1.0):
                tau = 0.2
                b0, b1 = s.power(tau)
                kind = s.utility.name
                if kind.startswith("crra"):
                    u = oracles.utility("crra", s.utility.gamma)
                else:
                    u = oracles.utility(kind)
                to_o = lambda d: d.value if isinstance(d, ConstantReward) else (d.mu, d.sigma, d.support.lo, d.support.hi)
                ref = oracles.optin_value(s.wealth0, s.cost, u, to_o(s.rewards.null), to_o(s.rewards.alt), b0, b1, prior)
                got = expected_optin_utility(s, prior, tau)
                assert got == pytest.approx(float(ref), rel=1e-10, abs=1e-10)

    def test_slope_negative(self):
        for s in random_scenarios(60, 9):
            d = utility_deltas(s)
            for tau in (0.01, 0.2, 0.6, 0.95):
                b0, b1 = s.power(tau)
                if b1 > b0 > 0:
                    assert b0 * d.delta0 - b1 * d.delta1 < 0


class TestOptIn:
    def test_brackets_first_transition(self, two_type):
        assert opts_in(two_type, 0.3, 0.17)
        assert not opts_in(two_type, 0.3, 0.15)

    def test_ideal_agent_low_threshold(self, two_type):
        assert BETA1_005 * 25 < 10
        assert not opts_in(two_type, 0.0, 0.05)

    @pytest.mark.parametrize("prior", [0.0, 0.5, 1.0])
    def test_certain_approval(self, two_type, prior):
        assert opts_in(two_type, prior, 1.0)

    def test_tie_opts_in(self):
        # beta1 * R == c exactly
        s = Scenario(20, 10, LinearUtility(), RewardModel(ConstantReward(25), ConstantReward(25)),
                     ExplicitTest(lambda t: 0.5 * t, lambda t: 0.4))
        assert optin_margin(s, 0.0, 0.3) == 0.0
        assert opts_in(s, 0.0, 0.3)

    def test_margin_sign_agrees(self, two_type):
        for tau in np.linspace(0, 1, 41):
            for prior in (0.0, 0.3, 0.9):
                m = optin_margin(two_type, prior, float(tau))
                if abs(m) > 1e-9:
                    assert opts_in(two_type, prior, float(tau)) == (m > 0)

    def test_monotone_participation(self):
        for s in random_scenarios(40, 13):
            for tau in (0.05, 0.3, 0.7):
                decisions = [opts_in(s, p, tau) for p in np.linspace(0, 1, 51)]
                # once out, stays out as the prior null grows
                first_out = decisions.index(False) if False in decisions else len(decisions)
                assert not any(decisions[first_out:])

    def test_ideal_agent_condition(self):
        for s in random_scenarios(40, 17):
            d = utility_deltas(s)
            for tau in np.linspace(0.01, 0.99, 25):
                b0, b1 = s.power(float(tau))
                if any(opts_in(s, p, float(tau)) for p in (0.0, 0.5, 1.0)):
                    assert b1 * d.delta1 - d.loss >= -1e-12 * max(1.0, d.loss)


class TestOptinThreshold:
    @pytest.mark.parametrize("prior", sorted(THRESH))
    def test_two_type_transitions(self, two_type, prior):
        assert optin_threshold(two_type, prior) == pytest.approx(THRESH[prior], abs=1e-8)

    def test_certain_null_at_cost_ratio(self, two_type):
        assert optin_threshold(two_type, 1.0) == pytest.approx(0.4, abs=1e-8)

    def test_never(self):
        # reward below cost: testing loses even with certain approval
        s = two_type_scenario(utility=LogUtility(), wealth0=10.5, cost=10.0, r0=9.0, r1=9.0)
        assert not opts_in(s, 0.0, 1.0)
        assert optin_threshold(s, 0.0) is None

    def test_always(self):
        s = Scenario(20, 1, LinearUtility(), RewardModel(ConstantReward(25), ConstantReward(25)),
                     ExplicitTest(lambda t: t, lambda t: 0.5 + 0.5 * t if t > 0 else 0.5))
        assert optin_threshold(s, 0.0) == 0.0

    def test_smallest_threshold(self):
        for s in random_scenarios(15, 21):
            for prior in (0.0, 0.4, 0.9):
                t = optin_threshold(s, prior)
                if t is None or t == 0.0:
                    continue
                assert opts_in(s, prior, t)
                assert not opts_in(s, prior, max(0.0, t - 1e-8))

import json

import pytest

from strategic_fdr.exceptions import ModelError
from strategic_fdr.harness.config import (
    TWO_TYPE_CONFIG,
    ConfigError,
    config_to_dict,
    dump_config,
    load_config,
    parse_config,
)
from strategic_fdr.model import CRRAUtility, GaussianMeanTest, LogUtility, TabulatedTest, TruncNormalReward

TN_CONFIG = {
    "scenario": {
        "wealth0": 200,
        "cost": 30,
        "utility": {"kind": "crra", "gamma": 0.7},
        "rewards": {
            "null": {"kind": "truncnormal", "mu": 50, "sigma": 35, "lo": 0, "hi": 100},
            "alt": {"kind": "truncnormal", "mu": 150, "sigma": 25, "lo": 120, "hi": 180},
        },
        "test": {"kind": "explicit", "tau": [0, 0.5, 1], "beta0": [0, 0.5, 1], "beta1": [0, 0.9, 1]},
    }
}


def test_default_is_two_type_example():
    cfg = load_config(None)
    assert cfg.scenario.wealth0 == 20 and cfg.scenario.cost == 10
    assert cfg.scenario.test == GaussianMeanTest(1.0)
    assert [(t.prior_null, t.weight) for t in cfg.mixture.types] == [(0.3, 0.1), (0.8, 0.9)]


def test_parse_truncnormal_and_explicit():
    cfg = parse_config(TN_CONFIG)
    assert cfg.mixture is None
    assert cfg.scenario.utility == CRRAUtility(0.7)
    assert isinstance(cfg.scenario.rewards.alt, TruncNormalReward)
    assert isinstance(cfg.scenario.test, TabulatedTest)
    assert cfg.scenario.power(0.25) == pytest.approx((0.25, 0.45))


def test_log_utility():
    data = json.loads(json.dumps(TWO_TYPE_CONFIG))
    data["scenario"]["utility"] = {"kind": "log"}
    assert isinstance(parse_config(data).scenario.utility, LogUtility)


@pytest.mark.parametrize("data", [TWO_TYPE_CONFIG, TN_CONFIG])
def test_round_trip(tmp_path, data):
    cfg = parse_config(data)
    path = tmp_path / "c.json"
    dump_config(cfg, path)
    again = load_config(path)
    assert config_to_dict(again) == config_to_dict(cfg)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("scenario"),
        lambda d: d["scenario"].pop("cost"),
        lambda d: d["scenario"].__setitem__("cost", "ten"),
        lambda d: d["scenario"]["rewards"]["null"].__setitem__("kind", "uniform"),
        lambda d: d["scenario"]["test"].__setitem__("kind", "t"),
        lambda d: d["scenario"]["test"].pop("theta1"),
        lambda d: d["mixture"].__setitem__("types", "x"),
        lambda d: d["mixture"]["types"][0].pop("weight"),
    ],
)
def test_parse_errors(mutate):
    data = json.loads(json.dumps(TWO_TYPE_CONFIG))
    mutate(data)
    with pytest.raises(ConfigError):
        parse_config(data)


def test_model_errors_are_not_parse_errors():
    data = json.loads(json.dumps(TWO_TYPE_CONFIG))
    data["mixture"]["types"][0]["weight"] = 0.5
    with pytest.raises(ModelError):
        parse_config(data)


def test_unreadable_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")

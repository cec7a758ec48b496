"""JSON scenario configuration.

Schema::

    {
      "scenario": {
        "wealth0": 20, "cost": 10,
        "utility": {"kind": "linear" | "crra" | "log", "gamma": 0.35},
        "rewards": {
          "null": {"kind": "constant", "value": 25},
          "alt":  {"kind": "truncnormal", "mu": 150, "sigma": 25, "lo": 120, "hi": 180}
        },
        "test": {"kind": "gaussian_mean", "theta1": 1.0}
              | {"kind": "explicit", "tau": [...], "beta0": [...], "beta1": [...]}
      },
      "mixture": {"types": [{"prior_null": 0.3, "weight": 0.1}, ...]}
    }

``mixture`` is optional. Explicit tests are tabulated curves, linearly
interpolated in ``tau``. Money is in any single unit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ..exceptions import ModelError
from ..mathkit import Interval
from ..model import (
    AgentMixture,
    ConstantReward,
    CRRAUtility,
    GaussianMeanTest,
    LinearUtility,
    LogUtility,
    RewardModel,
    Scenario,
    TabulatedTest,
    TruncNormalReward,
    make_utility,
)


class ConfigError(Exception):
    """Malformed configuration (missing keys, wrong types, bad JSON)."""


@dataclass(frozen=True)
class Config:
    scenario: Scenario
    mixture: AgentMixture | None = None


TWO_TYPE_CONFIG: dict[str, Any] = {
    "scenario": {
        "wealth0": 20.0,
        "cost": 10.0,
        "utility": {"kind": "linear"},
        "rewards": {
            "null": {"kind": "constant", "value": 25.0},
            "alt": {"kind": "constant", "value": 25.0},
        },
        "test": {"kind": "gaussian_mean", "theta1": 1.0},
    },
    "mixture": {
        "types": [
            {"prior_null": 0.3, "weight": 0.1},
            {"prior_null": 0.8, "weight": 0.9},
        ]
    },
}


def _get(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    if key not in d:
        raise ConfigError(f"missing key {where}.{key}")
    return d[key]


def _num(d: dict, key: str, where: str) -> float:
    v = _get(d, key, where)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    return float(v)


def _reward(d: dict, where: str):
    kind = _get(d, "kind", where)
    if kind == "constant":
        return ConstantReward(_num(d, "value", where))
    if kind == "truncnormal":
        support = Interval(_num(d, "lo", where), _num(d, "hi", where))
        return TruncNormalReward(_num(d, "mu", where), _num(d, "sigma", where), support)
    raise ConfigError(f"{where}.kind must be 'constant' or 'truncnormal', got {kind!r}")


def _test(d: dict):
    kind = _get(d, "kind", "test")
    if kind == "gaussian_mean":
        return GaussianMeanTest(_num(d, "theta1", "test"))
    if kind == "explicit":
        try:
            return TabulatedTest(d["tau"], d["beta0"], d["beta1"])
        except KeyError as exc:
            raise ConfigError(f"missing key test.{exc.args[0]}") from None
    raise ConfigError(f"test.kind must be 'gaussian_mean' or 'explicit', got {kind!r}")


def parse_scenario(d: dict) -> Scenario:
    util = _get(d, "utility", "scenario")
    kind = _get(util, "kind", "utility")
    gamma = util.get("gamma")
    rewards = _get(d, "rewards", "scenario")
    return Scenario(
        wealth0=_num(d, "wealth0", "scenario"),
        cost=_num(d, "cost", "scenario"),
        utility=make_utility(kind, None if gamma is None else float(gamma)),
        rewards=RewardModel(
            _reward(_get(rewards, "null", "rewards"), "rewards.null"),
            _reward(_get(rewards, "alt", "rewards"), "rewards.alt"),
        ),
        test=_test(_get(d, "test", "scenario")),
    )


def parse_mixture(d: dict) -> AgentMixture:
    types = _get(d, "types", "mixture")
    if not isinstance(types, list):
        raise ConfigError("mixture.types must be a list")
    pairs = [
        (_num(t, "prior_null", f"mixture.types[{i}]"), _num(t, "weight", f"mixture.types[{i}]"))
        for i, t in enumerate(types)
    ]
    return AgentMixture.from_pairs(pairs)


def parse_config(data: dict) -> Config:
    """Build a :class:`Config`; model-invariant violations raise ``ModelError``."""
    scenario = parse_scenario(_get(data, "scenario", "config"))
    mixture = parse_mixture(data["mixture"]) if data.get("mixture") is not None else None
    return Config(scenario, mixture)


def load_config(path: str | Path | None) -> Config:
    """Load a JSON config; ``None`` gives the built-in two-type Gaussian example."""
    if path is None:
        return parse_config(TWO_TYPE_CONFIG)
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(data)


def _reward_dict(r) -> dict:
    if isinstance(r, ConstantReward):
        return {"kind": "constant", "value": r.value}
    return {"kind": "truncnormal", "mu": r.mu, "sigma": r.sigma, "lo": r.support.lo, "hi": r.support.hi}


def scenario_to_dict(s: Scenario) -> dict:
    if isinstance(s.utility, LinearUtility):
        util = {"kind": "linear"}
    elif isinstance(s.utility, LogUtility):
        util = {"kind": "log"}
    elif isinstance(s.utility, CRRAUtility):
        util = {"kind": "crra", "gamma": s.utility.gamma}
    else:
        raise ModelError(f"cannot serialize utility {s.utility!r}")
    if isinstance(s.test, GaussianMeanTest):
        test = {"kind": "gaussian_mean", "theta1": s.test.theta1}
    elif isinstance(s.test, TabulatedTest):
        test = {
            "kind": "explicit",
            "tau": s.test.taus.tolist(),
            "beta0": s.test.beta0_table.tolist(),
            "beta1": s.test.beta1_table.tolist(),
        }
    else:
        raise ModelError("only Gaussian and tabulated tests can be serialized")
    return {
        "wealth0": s.wealth0,
        "cost": s.cost,
        "utility": util,
        "rewards": {"null": _reward_dict(s.rewards.null), "alt": _reward_dict(s.rewards.alt)},
        "test": test,
    }


def config_to_dict(config: Config) -> dict:
    out: dict[str, Any] = {"scenario": scenario_to_dict(config.scenario)}
    if config.mixture is not None:
        out["mixture"] = {
            "types": [{"prior_null": t.prior_null, "weight": t.weight} for t in config.mixture.types]
        }
    return out


def dump_config(config: Config, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n")

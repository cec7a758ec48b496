"""Command-line entry point.

Exit codes: 0 success, 1 model/validation failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..exceptions import ModelError
from ..mathkit import Interval
from ..maximin import PrincipalWeights, maximin_region
from ..model import validate
from .config import ConfigError, load_config
from .experiments import (
    epsilon_staircase,
    fda_csv_rows,
    fda_table,
    staircase_report,
    sweep,
    write_csv,
)
from .simulate import simulate

EXIT_OK, EXIT_MODEL, EXIT_USAGE = 0, 1, 2


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON scenario file (default: built-in two-type example)")


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="PATH", help="CSV destination (default: stdout)")


def _add_grid(p: argparse.ArgumentParser, tau_max: float | None) -> None:
    p.add_argument("--tau-min", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, default=tau_max)
    p.add_argument("--tau-steps", type=int, default=1000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strategic-fdr", description="FDR bounds for strategically opting-in agents.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="bounds and exact FDR over a threshold grid")
    _add_config(p)
    _add_grid(p, None)
    _add_out(p)

    p = sub.add_parser("simulate", help="Monte-Carlo play of the game at one threshold")
    _add_config(p)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)

    p = sub.add_parser("staircase", help="gaps between the sharp bound and a ratio mixture")
    _add_config(p)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--ratio", type=float, default=0.99)
    p.add_argument("--prior-lo", type=float, default=0.02)
    p.add_argument("--prior-hi", type=float, default=0.97)
    p.add_argument("--epsilon", type=float, help="use explicit epsilon weights at the grid thresholds instead")
    _add_grid(p, None)
    p.set_defaults(tau_steps=None)
    _add_out(p)

    p = sub.add_parser("maximin", help="largest maximin-optimal threshold")
    _add_config(p)
    p.add_argument("--omega0", type=float, default=1.0)
    p.add_argument("--omega1", type=float, default=1.0)
    p.add_argument("--tau-steps", type=int, default=10_000)
    _add_out(p)

    p = sub.add_parser("fda-table", help="Bates and unknown-power bounds for drug-approval protocols")
    _add_out(p)

    p = sub.add_parser("validate", help="check model assumptions of a scenario")
    _add_config(p)
    return parser


def _grid(args, default_hi: float) -> np.ndarray:
    hi = default_hi if args.tau_max is None else args.tau_max
    steps = args.tau_steps
    if steps is None or steps < 2:
        raise ConfigError("--tau-steps must be at least 2")
    if not 0.0 <= args.tau_min <= hi <= 1.0:
        raise ConfigError(f"need 0 <= tau-min <= tau-max <= 1, got {args.tau_min}, {hi}")
    return np.linspace(args.tau_min, hi, steps)


def _emit(rows, out: str | None) -> None:
    write_csv(rows, out if out else sys.stdout)


@dataclass(frozen=True)
class _MaximinRow:
    omega0: float
    omega1: float
    target: float
    tau_max: float


@dataclass(frozen=True)
class _EpsilonRow:
    tau: float
    prior_null: float
    weight: float
    gap: float


def _run(args) -> int:
    if args.command == "fda-table":
        _emit(fda_csv_rows(fda_table()), args.out)
        return EXIT_OK

    config = load_config(args.config)
    scenario = config.scenario

    if args.command == "validate":
        report = validate(scenario)
        print(report.format())
        return EXIT_OK if report.ok else EXIT_MODEL

    if args.command == "sweep":
        if config.mixture is None:
            raise ConfigError("sweep needs a mixture section")
        default_hi = min(1.0, scenario.cost / scenario.rewards.alt.mean())
        _emit(sweep(scenario, config.mixture, _grid(args, default_hi)), args.out)
        return EXIT_OK

    if args.command == "simulate":
        if config.mixture is None:
            raise ConfigError("simulate needs a mixture section")
        if not 0.0 <= args.tau <= 1.0:
            raise ConfigError("--tau must lie in [0, 1]")
        _emit([simulate(scenario, config.mixture, args.tau, args.n, args.seed)], args.out)
        return EXIT_OK

    if args.command == "staircase":
        if args.epsilon is not None:
            if args.tau_max is None or args.tau_steps is None:
                raise ConfigError("--epsilon needs --tau-min, --tau-max and --tau-steps")
            taus = _grid(args, args.tau_max)
            mixture, gaps = epsilon_staircase(scenario, taus, args.epsilon)
            rows = [
                _EpsilonRow(float(t), ty.prior_null, ty.weight, g)
                for t, ty, g in zip(taus, mixture.types, gaps)
            ]
            _emit(rows, args.out)
            return EXIT_OK
        grid = None
        if args.tau_max is not None or args.tau_steps is not None:
            if args.tau_steps is None:
                args.tau_steps = 1000
            grid = _grid(args, 1.0)
        report = staircase_report(scenario, args.k, Interval(args.prior_lo, args.prior_hi), args.ratio, grid)
        _emit(list(report.rows), args.out)
        print(
            f"max gap (grid) {report.max_gap_grid:.6g}; at exact transitions {report.max_gap_exact:.6g}",
            file=sys.stderr,
        )
        return EXIT_OK

    if args.command == "maximin":
        weights = PrincipalWeights(args.omega0, args.omega1)
        res = maximin_region(scenario, weights, grid=args.tau_steps)
        _emit([_MaximinRow(args.omega0, args.omega1, res.target, res.tau_max)], args.out)
        return EXIT_OK

    raise ConfigError(f"unknown command {args.command}")  # pragma: no cover


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelError, ValueError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Threshold sweeps, the FDA protocol table and staircase reports."""

from __future__ import annotations

import csv
import dataclasses
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from ..agent import optin_threshold, opts_in
from ..bounds import (
    BoundResult,
    bates_bound,
    conservative_bound,
    fdr_bound_conservative,
    mean_reward_deltas,
    psi,
    scenario_bates_bound,
)
from ..mathkit import Interval, find_boundary
from ..mixture import (
    exact_fdr_single,
    mixture_fdr,
    mixture_from_ratio,
    staircase_mixture,
    worstcase_prior,
)
from ..model import (
    AgentMixture,
    ConstantReward,
    CRRAUtility,
    GaussianMeanTest,
    LinearUtility,
    RewardModel,
    Scenario,
)

# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".10g")
    if hasattr(v, "value") and isinstance(getattr(v, "value"), str):  # enums
        return v.value
    return str(v)


def write_csv(rows: Sequence, out: str | Path | IO[str]) -> None:
    """Write dataclass rows with a header, fields in declaration order."""
    if not rows:
        raise ValueError("no rows to write")
    names = [f.name for f in dataclasses.fields(rows[0])]

    def emit(fh: IO[str]) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for r in rows:
            w.writerow([_fmt(getattr(r, n)) for n in names])

    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            emit(fh)
    else:
        emit(out)


def to_csv_string(rows: Sequence) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    tau: float
    bates_bound: float
    bound_known: float
    bound_conservative: float
    exact_fdr: float
    status: str


def sweep(scenario: Scenario, mixture: AgentMixture, tau_grid: Iterable[float]) -> list[SweepRow]:
    """Raw bound traces and the exact population FDR along ``tau_grid``.

    Bound columns carry raw (unclamped) values; ``status`` classifies the
    known-power bound.
    """
    rows = []
    for t in tau_grid:
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"tau grid must lie in [0, 1], got {t}")
        known = psi(scenario, t)
        rows.append(
            SweepRow(
                tau=t,
                bates_bound=scenario_bates_bound(scenario, t).value,
                bound_known=known.value,
                bound_conservative=conservative_bound(scenario, t).value,
                exact_fdr=mixture_fdr(scenario, mixture, t).fdr,
                status=known.status.value,
            )
        )
    return rows


def step_transitions(rows: Sequence[SweepRow], min_jump: float = 1e-3) -> list[float]:
    """Grid thresholds where the exact FDR jumps upward (new types opting in)."""
    out = []
    for prev, cur in zip(rows, rows[1:]):
        if cur.exact_fdr - prev.exact_fdr > min_jump:
            out.append(cur.tau)
    return out


# ---------------------------------------------------------------------------
# FDA table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FdaSetup:
    """Money in $ millions."""

    protocols: tuple[tuple[str, float], ...] = (
        ("standard", 0.000625),  # two trials at one-sided 0.025
        ("modernized", 0.005),  # one trial at two-sided 0.01
        ("accelerated", 0.05),  # either of two trials at two-sided 0.05
    )
    cost: float = 200.0
    wealth0: float = 5000.0
    null_reward: float = 800.0
    alt_rewards: tuple[float, ...] = (1000.0, 25000.0, 50000.0)
    gammas: tuple[float, ...] = (0.0, 0.35, 0.7)
    kappa: float = 1.0


@dataclass(frozen=True)
class FdaRow:
    protocol: str
    tau: float
    alt_reward: float
    bates: BoundResult
    bounds: tuple[BoundResult, ...]
    gammas: tuple[float, ...] = ()


def _utility(gamma: float):
    return LinearUtility() if gamma == 0.0 else CRRAUtility(gamma)


def fda_table(setup: FdaSetup = FdaSetup()) -> list[FdaRow]:
    """Bates and unknown-power bounds for each protocol, reward and risk level."""
    rows = []
    for name, tau in setup.protocols:
        for r1 in setup.alt_rewards:
            bounds = []
            for g in setup.gammas:
                s = Scenario(
                    wealth0=setup.wealth0,
                    cost=setup.cost,
                    utility=_utility(g),
                    rewards=RewardModel(ConstantReward(setup.null_reward), ConstantReward(r1)),
                    test=GaussianMeanTest(1.0),  # unused: only tau and kappa enter
                )
                bounds.append(fdr_bound_conservative(tau, setup.kappa, mean_reward_deltas(s)))
            rows.append(
                FdaRow(name, tau, r1, bates_bound(tau, r1, setup.cost), tuple(bounds), tuple(setup.gammas))
            )
    return rows


def format_percent(b: BoundResult, digits: int = 4) -> str:
    """Percentage string, ``n/a`` when the bound is at least one."""
    if b.value >= 1.0:
        return "n/a"
    return f"{100.0 * b.value:.{digits}g}"


@dataclass(frozen=True)
class FdaCsvRow:
    protocol: str
    tau_percent: float
    alt_reward: float
    bates_percent: str
    neutral_percent: str
    slight_percent: str
    high_percent: str


def fda_csv_rows(rows: Sequence[FdaRow]) -> list[FdaCsvRow]:
    out = []
    for r in rows:
        cells = [format_percent(b) for b in r.bounds]
        cells += [""] * (3 - len(cells))
        out.append(
            FdaCsvRow(r.protocol, 100.0 * r.tau, r.alt_reward, format_percent(r.bates), *cells[:3])
        )
    return out


# ---------------------------------------------------------------------------
# Staircase
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StaircaseRow:
    prior_null: float
    weight: float
    transition_tau: float
    psi: float
    fdr: float
    gap: float
    grid_tau: float
    grid_gap: float


@dataclass(frozen=True)
class StaircaseReport:
    """Gaps between the sharp bound and the mixture FDR at each type's entry.

    ``max_gap_exact`` is measured at the analytic opt-in thresholds;
    ``max_gap_grid`` at the first grid threshold where each type is in,
    which is how a plotted staircase would be read.
    """

    rows: tuple[StaircaseRow, ...]
    mixture: AgentMixture
    tau_grid: np.ndarray

    @property
    def max_gap_exact(self) -> float:
        return max((r.gap for r in self.rows if not math.isnan(r.gap)), default=0.0)

    @property
    def max_gap_grid(self) -> float:
        return max((r.grid_gap for r in self.rows if not math.isnan(r.grid_gap)), default=0.0)


def default_tau_grid(scenario: Scenario, n: int = 1000) -> np.ndarray:
    """``n`` points from 0 to the threshold at which a certainly-null agent opts in."""
    top = optin_threshold(scenario, 1.0)
    return np.linspace(0.0, 1.0 if top is None else top, n)


def _gap_at(scenario: Scenario, mixture: AgentMixture, tau: float) -> tuple[float, float]:
    bound = psi(scenario, tau).value
    fdr = mixture_fdr(scenario, mixture, tau).fdr
    return bound, fdr


def staircase_gaps(
    scenario: Scenario, mixture: AgentMixture, tau_grid: np.ndarray | None = None
) -> StaircaseReport:
    """Evaluate bound-minus-FDR gaps where each mixture type starts opting in."""
    grid = default_tau_grid(scenario) if tau_grid is None else np.asarray(tau_grid, dtype=float)
    rows = []
    for t in mixture.types:
        entry = optin_threshold(scenario, t.prior_null)
        if entry is None:
            rows.append(StaircaseRow(t.prior_null, t.weight, *([math.nan] * 6)))
            continue
        bound, fdr = _gap_at(scenario, mixture, entry)
        later = grid[grid >= entry]
        # first grid point at which this type is actually in
        g_tau = math.nan
        g_gap = math.nan
        for gt in later:
            if opts_in(scenario, t.prior_null, float(gt)):
                g_tau = float(gt)
                gb, gf = _gap_at(scenario, mixture, g_tau)
                g_gap = gb - gf
                break
        rows.append(StaircaseRow(t.prior_null, t.weight, entry, bound, fdr, bound - fdr, g_tau, g_gap))
    return StaircaseReport(tuple(rows), mixture, grid)


def staircase_report(
    scenario: Scenario,
    k: int,
    prior_range: Interval = Interval(0.02, 0.97),
    ratio: float = 0.99,
    tau_grid: np.ndarray | None = None,
) -> StaircaseReport:
    """Ratio-weighted mixture of ``k`` evenly spaced priors and its staircase gaps."""
    if k < 1:
        raise ValueError("k must be at least 1")
    priors = [prior_range.lo] if k == 1 else np.linspace(prior_range.lo, prior_range.hi, k)
    mixture = mixture_from_ratio(priors, ratio)
    return staircase_gaps(scenario, mixture, tau_grid)


def valid_threshold_span(scenario: Scenario, floor: float, ceiling: float = 0.95) -> Interval:
    """Thresholds where the sharp bound lies in ``[floor, ceiling]``."""
    lo_entry = optin_threshold(scenario, 0.0)
    hi_entry = optin_threshold(scenario, 1.0)
    if lo_entry is None:
        raise ValueError("no agent opts in at any threshold")
    top = 1.0 if hi_entry is None else hi_entry
    bracket = Interval(lo_entry, top)
    a = find_boundary(lambda t: psi(scenario, t).value >= floor, bracket, 1e-12)
    b = find_boundary(lambda t: psi(scenario, t).value >= ceiling, bracket, 1e-12)
    return Interval(a, b)


def epsilon_staircase(
    scenario: Scenario, thresholds: Sequence[float], epsilon: float
) -> tuple[AgentMixture, list[float]]:
    """Explicit-weight construction; returns the mixture and ``Psi - FDR_K`` per threshold."""
    mixture = staircase_mixture(scenario, thresholds, epsilon)
    gaps = []
    for t in thresholds:
        bound, fdr = _gap_at(scenario, mixture, float(t))
        gaps.append(bound - fdr)
    return mixture, gaps


def worstcase_sharpness_gap(scenario: Scenario, tau: float) -> float:
    """``|phi(worst-case prior) - Psi|`` at one threshold."""
    p = worstcase_prior(scenario, tau)
    b0, b1 = scenario.power(tau)
    return abs(exact_fdr_single(p, b0, b1) - psi(scenario, tau).value)


__all__ = [
    "FdaCsvRow",
    "FdaRow",
    "FdaSetup",
    "StaircaseReport",
    "StaircaseRow",
    "SweepRow",
    "default_tau_grid",
    "epsilon_staircase",
    "fda_csv_rows",
    "fda_table",
    "format_percent",
    "staircase_gaps",
    "staircase_report",
    "step_transitions",
    "sweep",
    "to_csv_string",
    "valid_threshold_span",
    "worstcase_sharpness_gap",
    "write_csv",
]

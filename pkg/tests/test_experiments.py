import csv
import io

import numpy as np
import pytest

from strategic_fdr.bounds import psi
from strategic_fdr.harness.experiments import (
    FdaSetup,
    default_tau_grid,
    epsilon_staircase,
    fda_csv_rows,
    fda_table,
    format_percent,
    staircase_report,
    step_transitions,
    sweep,
    to_csv_string,
    valid_threshold_span,
    worstcase_sharpness_gap,
    write_csv,
)
from strategic_fdr.bounds import BoundResult
from strategic_fdr.mathkit import Interval

from conftest import two_type_scenario


class TestSweep:
    def test_two_transitions(self, two_type, two_type_mixture):
        rows = sweep(two_type, two_type_mixture, np.linspace(0, 0.4, 1000))
        steps = step_transitions(rows)
        assert len(steps) == 2
        assert steps[0] == pytest.approx(0.16, abs=0.005)
        assert steps[1] == pytest.approx(0.32, abs=0.005)

    def test_stronger_effect_shifts_transitions_left(self, two_type_mixture):
        grid = np.linspace(0, 0.4, 1000)
        weak = step_transitions(sweep(two_type_scenario(theta1=1.0), two_type_mixture, grid))
        strong = step_transitions(sweep(two_type_scenario(theta1=2.0), two_type_mixture, grid))
        assert len(strong) == len(weak) == 2
        assert all(s < w for s, w in zip(strong, weak))

    def test_zero_threshold_row(self, two_type, two_type_mixture):
        row = sweep(two_type, two_type_mixture, [0.0])[0]
        assert row.exact_fdr == 0.0
        assert row.bates_bound == 0.0 and row.bound_conservative == 0.0
        assert row.bound_known == 0.0 or row.status == "NoOptInRegion"

    def test_rows_finite_and_dominated(self, two_type, two_type_mixture):
        for row in sweep(two_type, two_type_mixture, np.linspace(0, 1, 201)):
            assert all(np.isfinite([row.bates_bound, row.bound_known, row.bound_conservative, row.exact_fdr]))
            if row.status == "Valid":
                assert row.exact_fdr <= min(max(row.bound_known, 0.0), 1.0) + 1e-10

    def test_grid_range(self, two_type, two_type_mixture):
        with pytest.raises(ValueError):
            sweep(two_type, two_type_mixture, [0.5, 1.5])


class TestCsv:
    def test_format(self, two_type, two_type_mixture):
        text = to_csv_string(sweep(two_type, two_type_mixture, [0.0, 1 / 3]))
        lines = text.split("\n")
        assert lines[0] == "tau,bates_bound,bound_known,bound_conservative,exact_fdr,status"
        assert text.endswith("\n")
        assert lines[2].startswith("0.3333333333,")
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert len(parsed) == 2

    def test_file_output(self, tmp_path, two_type, two_type_mixture):
        path = tmp_path / "s.csv"
        write_csv(sweep(two_type, two_type_mixture, [0.2]), path)
        assert path.read_text().count("\n") == 2

    def test_empty(self):
        with pytest.raises(ValueError):
            write_csv([], io.StringIO())


class TestFdaTable:
    def test_shape(self):
        rows = fda_table()
        assert len(rows) == 9
        assert [r.protocol for r in rows[::3]] == ["standard", "modernized", "accelerated"]
        assert all(len(r.bounds) == 3 for r in rows)

    def test_format_percent(self):
        assert format_percent(BoundResult.from_value(0.0025)) == "0.25"
        assert format_percent(BoundResult.from_value(1.25)) == "n/a"
        assert format_percent(BoundResult.from_value(1.0)) == "n/a"

    def test_bates_na(self):
        rows = {(r.protocol, r.alt_reward): r for r in fda_table()}
        assert rows[("modernized", 50000.0)].bates.value == pytest.approx(1.25)
        assert format_percent(rows[("modernized", 50000.0)].bates) == "n/a"

    def test_csv_rows(self):
        out = fda_csv_rows(fda_table())
        assert out[0].neutral_percent == "0.25"
        assert out[0].tau_percent == pytest.approx(0.0625)

    def test_custom_setup(self):
        rows = fda_table(FdaSetup(protocols=(("only", 0.01),), alt_rewards=(2000.0,), gammas=(0.0,)))
        assert len(rows) == 1 and len(rows[0].bounds) == 1


class TestStaircaseReport:
    def test_single_type_exact(self, two_type):
        rep = staircase_report(two_type, 1)
        assert rep.max_gap_exact <= 1e-10

    def test_rows_per_type(self, two_type):
        rep = staircase_report(two_type, 5, Interval(0.1, 0.9), 0.9)
        assert len(rep.rows) == 5
        assert all(r.grid_tau >= r.transition_tau for r in rep.rows)
        assert all(r.gap >= -1e-10 for r in rep.rows)

    def test_default_grid(self, two_type):
        grid = default_tau_grid(two_type)
        assert len(grid) == 1000 and grid[0] == 0.0
        assert grid[-1] == pytest.approx(0.4, abs=1e-9)

    def test_k_positive(self, two_type):
        with pytest.raises(ValueError):
            staircase_report(two_type, 0)

    def test_epsilon_staircase(self, two_type):
        taus = np.linspace(0.12, 0.38, 12)
        mixture, gaps = epsilon_staircase(two_type, taus, 1e-3)
        assert len(mixture) == 12
        assert abs(gaps[0]) <= 1e-10
        assert all(-1e-10 <= g <= 1e-3 + 1e-10 for g in gaps)


def test_valid_threshold_span(two_type):
    span = valid_threshold_span(two_type, 0.01)
    assert psi(two_type, span.lo).value >= 0.01
    assert psi(two_type, span.hi).value >= 0.95 > psi(two_type, span.hi - 1e-9).value


def test_worstcase_sharpness_gap(two_type):
    assert worstcase_sharpness_gap(two_type, 0.2) <= 1e-12


def test_plotting_grid_gaps(two_type):
    # on a 1000-point grid over [0, c/R] the ratio staircase shows gaps of
    # about 0.002 (K=20) and 0.0015 (K=40); finer grids shrink them toward
    # the exact-transition values
    g20 = staircase_report(two_type, 20).max_gap_grid
    g40 = staircase_report(two_type, 40).max_gap_grid
    assert g20 == pytest.approx(0.0020, abs=1e-4)
    assert g40 == pytest.approx(0.0015, abs=1e-4)
    fine = np.linspace(0, 0.4, 20_000)
    assert staircase_report(two_type, 20, tau_grid=fine).max_gap_grid == pytest.approx(
        staircase_report(two_type, 20).max_gap_exact, abs=1e-4
    )

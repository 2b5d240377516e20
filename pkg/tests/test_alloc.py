from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridshare import (DataError, allocate, alpha_grid, indifferent_alpha,
                       share_curve, sweep, weights_for_alpha)
from gridshare.alloc import (allocation_to_json, indifference_to_json,
                             sweep_to_json, sweep_to_tsv)
from gridshare.weights import EM, RGM, WeightVector
from helpers import TEAM_POOL


def vector(values, method="rgm"):
    w = np.asarray(values, dtype=float)
    return WeightVector(tuple(TEAM_POOL[:len(w)]), w / w.sum(), method)


class TestAlphaGrid:
    def test_default_grid(self):
        grid = alpha_grid()
        assert grid[0] == 0.0 and grid[-1] == 3.0
        assert len(grid) == 151
        assert grid[1] == 0.02

    def test_snapped_values(self):
        assert alpha_grid(0.1, 0.3, 0.1) == (0.1, 0.2, 0.3)

    def test_validation(self):
        with pytest.raises(DataError):
            alpha_grid(0.0, 1.0, 0.0)
        with pytest.raises(DataError):
            alpha_grid(2.0, 1.0, 0.1)


class TestAllocate:
    def test_equal_shares_of_a_round_pot(self):
        report = allocate(vector([1.0] * 10), pot=350.0, rounding_unit=1.0)
        assert all(entry.amount == 35.0 for entry in report.entries)
        assert report.total_units() == 350

    def test_forced_split_prefers_earlier_team(self):
        report = allocate(vector([0.5, 0.5]), pot=101.0, rounding_unit=1.0)
        amounts = [entry.amount for entry in report.entries]
        assert amounts == [51.0, 50.0]

    def test_bundled_weights_conserve_pot(self, table3):
        wv = weights_for_alpha(table3, RGM, 1.0)
        report = allocate(wv, pot=1000.0, rounding_unit=0.01, alpha=1.0)
        assert report.total_units() == 100_000
        assert math.fsum(e.amount for e in report.entries) == pytest.approx(
            1000.0, abs=1e-9)
        assert math.fsum(e.share for e in report.entries) == pytest.approx(
            1.0, abs=1e-12)

    def test_pot_must_be_a_unit_multiple(self):
        with pytest.raises(DataError, match="multiple"):
            allocate(vector([1.0, 1.0]), pot=100.5, rounding_unit=1.0)
        with pytest.raises(DataError, match="positive"):
            allocate(vector([1.0, 1.0]), pot=-5.0)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 99_999))
    def test_unit_conservation_on_random_inputs(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 15))
        w = vector(rng.uniform(0.01, 1.0, size=n))
        total_units = int(rng.integers(1, 10_000_000))
        unit = float(rng.choice([0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 5.0]))
        report = allocate(w, pot=total_units * unit, rounding_unit=unit)
        assert report.total_units() == total_units
        # every team within one unit of its exact entitlement
        for entry in report.entries:
            assert abs(entry.units - entry.share * total_units) < 1.0


class TestShareCurve:
    def test_zero_exponent_is_exactly_uniform(self, table3):
        for method in (EM, RGM):
            curve = share_curve(table3, "Caterham", method, (0.0,))
            assert curve == [(0.0, 1.0 / 11)]

    def test_reference_endpoints(self, table3):
        merc_rgm = dict(share_curve(table3, "Mercedes", RGM, (1.0, 3.0)))
        assert merc_rgm[1.0] == pytest.approx(0.3173, abs=1e-3)
        assert merc_rgm[3.0] == pytest.approx(0.7657, abs=1e-3)
        merc_em = dict(share_curve(table3, "Mercedes", EM, (1.0, 3.0)))
        assert merc_em[1.0] == pytest.approx(0.3401, abs=1e-3)
        assert merc_em[3.0] == pytest.approx(0.8189, abs=1e-3)

    def test_values_equal_weight_module_output_exactly(self, table3):
        grid = (0.0, 0.5, 1.0, 2.0)
        curve = share_curve(table3, "Williams", EM, grid)
        idx = table3.index_of("Williams")
        for alpha, share in curve:
            assert share == weights_for_alpha(table3, EM, alpha).w[idx]

    def test_unknown_team_rejected(self, table3):
        with pytest.raises(DataError, match="unknown team"):
            share_curve(table3, "Brawn", EM, (1.0,))


class TestIndifferentAlpha:
    def test_uniform_target_roots_at_zero_exactly(self, table3):
        result = indifferent_alpha(table3, "Mercedes", 1.0 / 11, RGM)
        assert result.roots[0].alpha == 0.0
        assert not result.no_solution

    def test_round_trip_recovers_the_exponent(self, table3):
        target = weights_for_alpha(table3, RGM, 0.8).share_of("Mercedes")
        result = indifferent_alpha(table3, "Mercedes", target, RGM)
        assert not result.no_solution
        assert len(result.roots) == 1
        assert abs(result.roots[0].alpha - 0.8) < 1e-3

    def test_roots_satisfy_residual_bound(self, table3):
        target = weights_for_alpha(table3, EM, 1.7).share_of("Red Bull")
        result = indifferent_alpha(table3, "Red Bull", target, EM, tol=1e-9)
        assert result.roots
        for root in result.roots:
            share = weights_for_alpha(table3, EM, root.alpha).share_of(
                "Red Bull")
            assert abs(share - target) < 1e-9

    def test_non_monotone_curve_yields_multiple_roots(self, table3):
        # the Red Bull share rises to an interior peak then falls, so a
        # level just below the peak is crossed twice
        peak = max(s for _, s in share_curve(table3, "Red Bull", EM,
                                             alpha_grid(0.0, 3.0, 0.05)))
        target = peak - 0.002
        result = indifferent_alpha(table3, "Red Bull", target, EM)
        assert len(result.roots) == 2
        assert result.roots[0].alpha < result.roots[1].alpha

    def test_unattainable_target_flags_no_solution(self, table3):
        result = indifferent_alpha(table3, "Caterham", 0.5, EM)
        assert result.no_solution
        assert result.roots == ()

    def test_target_bounds_enforced(self, table3):
        with pytest.raises(DataError):
            indifferent_alpha(table3, "Mercedes", 0.0, RGM)
        with pytest.raises(DataError):
            indifferent_alpha(table3, "Mercedes", 1.0, RGM)


class TestSweep:
    def test_record_cardinality(self, table3):
        result = sweep(table3, [EM, RGM], alpha_grid(0.1, 3.0, 0.1))
        assert len(result.records) == 30
        assert result.methods == ("em", "rgm")
        for record in result.records:
            assert set(record.weights) == {"em", "rgm"}

    def test_reference_concentration_at_two(self, sweep2014):
        record = sweep2014.record_at(2.0)
        assert record.hhi_star["em"] == pytest.approx(0.3716, abs=1e-3)

    def test_rgm_crossings_empty(self, sweep2014):
        assert sweep2014.crossings["rgm"].is_empty()

    def test_interior_maxima_flag_the_middle_teams(self, sweep2014):
        # the five teams between the leader and the tail peak strictly
        # inside the exponent range; the leader peaks at the top end and
        # the tail teams at zero
        expected = ("Red Bull", "Williams", "Ferrari", "McLaren",
                    "Force India")
        assert sweep2014.interior_maxima["em"] == expected
        assert sweep2014.interior_maxima["rgm"] == expected

    def test_tsv_export_shape(self, sweep2014):
        text = sweep_to_tsv(sweep2014, "em")
        lines = text.strip().split("\n")
        assert lines[0].split("\t") == ["alpha", *sweep2014.teams,
                                        "hhi_star"]
        assert len(lines) == 1 + 151
        first = lines[1].split("\t")
        assert float(first[0]) == 0.0
        assert float(first[1]) == pytest.approx(1 / 11, abs=1e-15)

    def test_tsv_unknown_method_rejected(self, sweep2014):
        with pytest.raises(DataError):
            sweep_to_tsv(sweep2014, "lsq")

    def test_json_export(self, sweep2014):
        doc = json.loads(sweep_to_json(sweep2014))
        assert doc["teams"][0] == "Mercedes"
        assert len(doc["records"]) == 151
        assert doc["crossings"]["rgm"] == []
        assert {c["overtaken"] for c in doc["crossings"]["em"]} >= {
            "Williams", "Marussia"}


class TestReportSerialization:
    def test_allocation_json(self, table3):
        wv = weights_for_alpha(table3, RGM, 1.0)
        doc = json.loads(allocation_to_json(
            allocate(wv, 350.0, 1.0, alpha=1.0, epsilon=0.0)))
        assert doc["pot"] == 350.0
        assert doc["method"] == "rgm"
        assert len(doc["allocations"]) == 11
        assert sum(a["units"] for a in doc["allocations"]) == 350

    def test_indifference_json_marks_smallest_root(self, table3):
        target = weights_for_alpha(table3, EM, 1.2).share_of("Mercedes")
        doc = json.loads(indifference_to_json(
            indifferent_alpha(table3, "Mercedes", target, EM)))
        assert doc["no_solution"] is False
        assert doc["roots"][0]["smallest"] is True
        assert all(not r["smallest"] for r in doc["roots"][1:])

# tests/test_scheme.py
"""
Tests for the simplified scheme data, the ISO 2859-1 reference plans,
comparison and recommendation.
"""
import json

import pytest

import config
from sampling.criteria import TwoPointCriterion, admissible_binomial, admissible_extended
from sampling.dist import SamplingPlan
from sampling.errors import DomainError, SchemeValidationError
from sampling.scheme import (
    compare,
    iso_reference_plans,
    recommend_plan,
    scheme_plans,
    simplified_scheme,
)


def _row(rows, lot_from):
    return next(r for r in rows if r.lot_from == lot_from)


# ────────────────────────────────────────────────────────────
# Scheme rows
# ────────────────────────────────────────────────────────────

class TestSimplifiedScheme:
    def test_rows(self):
        rows = simplified_scheme()
        assert [(r.lot_from, r.lot_to) for r in rows] == [
            (21, 24), (25, 31), (32, 41), (42, 61), (62, 122), (123, 248), (249, 500), (501, 1000), (1001, None),
        ]
        assert all(r.canonical for r in rows)

    def test_row_249_500(self):
        row = _row(simplified_scheme(), 249)
        assert row.plans() == [SamplingPlan(40, 0), SamplingPlan(63, 1)]
        assert 100 * row.entries[0].beta_min == pytest.approx(4.21, abs=0.1)
        assert 100 * row.entries[1].alpha_max == pytest.approx(12.2, abs=0.1)
        assert row.entries[2] is None

    def test_last_row(self):
        row = _row(simplified_scheme(), 1001)
        assert row.plans() == [SamplingPlan(42, 0), SamplingPlan(66, 1), SamplingPlan(88, 2)]
        assert 100 * row.entries[2].alpha_max == pytest.approx(5.87, abs=0.1)

    def test_first_row_not_operational(self):
        row = simplified_scheme()[0]
        assert row.plans() == [SamplingPlan(20, 0)]
        assert not row.alpha_operational

    def test_every_plan_admissible_at_both_ends(self):
        for row in simplified_scheme():
            for plan in row.plans():
                assert admissible_extended(row.lot_from, plan).admissible
                if row.lot_to is None:
                    assert admissible_binomial(plan).admissible
                else:
                    assert admissible_extended(row.lot_to, plan).admissible

    def test_risk_bounds(self):
        for row in simplified_scheme():
            for entry in row.entries:
                if entry is None:
                    continue
                assert entry.beta_min < 0.05
                if row.alpha_operational:
                    assert entry.alpha_max > 0.05

    def test_recomputed_for_other_criterion(self):
        crit = TwoPointCriterion(p_b=0.08)
        rows = simplified_scheme(crit)
        assert len(rows) == 9
        assert not any(r.canonical for r in rows)
        for row in rows:
            for plan in row.plans():
                assert admissible_extended(row.lot_from, plan, crit).admissible
        # a looser LQ point needs no more than the canonical sample
        assert _row(rows, 1001).entries[0].plan.n <= 42


class TestSchemeValidation:
    def _write(self, tmp_path, mutate):
        document = json.loads(config.SCHEME_FILE.read_text())
        mutate(document)
        path = tmp_path / "scheme.json"
        path.write_text(json.dumps(document))
        return path

    def test_transcription_drift(self, tmp_path):
        def mutate(d):
            d["rows"][6]["plans"]["c0"]["beta_min_pct"] = 3.0
        with pytest.raises(SchemeValidationError) as exc:
            simplified_scheme(path=self._write(tmp_path, mutate))
        assert exc.value.row.lot_from == 249

    def test_inadmissible_plan(self, tmp_path):
        def mutate(d):
            d["rows"][4]["plans"]["c0"]["n"] = 30
        with pytest.raises(SchemeValidationError):
            simplified_scheme(path=self._write(tmp_path, mutate))

    def test_rows_must_be_contiguous(self, tmp_path):
        def mutate(d):
            d["rows"][1]["lot_from"] = 26
        with pytest.raises(SchemeValidationError):
            simplified_scheme(path=self._write(tmp_path, mutate))

    def test_cell_acceptance_number(self, tmp_path):
        def mutate(d):
            d["rows"][8]["plans"]["c1"]["c"] = 2
        with pytest.raises(SchemeValidationError):
            simplified_scheme(path=self._write(tmp_path, mutate))


# ────────────────────────────────────────────────────────────
# ISO reference plans
# ────────────────────────────────────────────────────────────

class TestIsoReferencePlans:
    def test_members(self):
        plans = [r.plan for r in iso_reference_plans()]
        assert plans == [SamplingPlan(n, c) for n, c in [(50, 0), (80, 1), (125, 2), (200, 3), (315, 5), (800, 10)]]

    def test_known_ranges(self):
        ranges = {(r.plan.n, r.plan.c): (r.lot_from, r.lot_to) for r in iso_reference_plans()}
        assert ranges[(50, 0)] == (51, 500)
        assert ranges[(800, 10)] == (150001, 500000)
        assert ranges[(80, 1)] == (None, None)

    def test_no_plan_with_four_acceptances(self):
        assert all(r.plan.c != 4 for r in iso_reference_plans())


# ────────────────────────────────────────────────────────────
# Comparison and recommendation
# ────────────────────────────────────────────────────────────

class TestCompare:
    def test_small_lot_with_iso_range(self):
        cmp = compare(400)
        assert [pr.plan for pr in cmp.scheme] == [SamplingPlan(40, 0), SamplingPlan(63, 1)]
        assert cmp.iso.plan == SamplingPlan(50, 0)
        assert cmp.iso.risk.alpha > cmp.scheme[0].risk.alpha

    def test_large_lot(self):
        cmp = compare(200000)
        assert [pr.plan.c for pr in cmp.scheme] == [0, 1, 2]
        assert cmp.iso.plan == SamplingPlan(800, 10)

    def test_below_first_row(self):
        cmp = compare(20)
        assert [pr.plan for pr in cmp.scheme] == [SamplingPlan(18, 0)]
        assert cmp.scheme[0].source == "computed"
        assert cmp.iso is None

    @pytest.mark.parametrize("N", [12, 15])
    def test_full_inspection(self, N):
        cmp = compare(N)
        assert cmp.full_inspection
        assert cmp.scheme == ()

    @pytest.mark.parametrize("N", [51, 100, 250, 400, 500])
    def test_zero_acceptance_plan_within_iso(self, N):
        plans, _ = scheme_plans(N)
        iso = next(r for r in iso_reference_plans() if r.covers(N))
        assert iso.plan == SamplingPlan(50, 0)
        zero = [p for p in plans if p.c == 0]
        assert len(zero) == 1
        assert zero[0].n <= iso.plan.n

    @pytest.mark.parametrize("N", [150001, 300000, 500000])
    def test_large_lot_plans_within_iso(self, N):
        plans, _ = scheme_plans(N)
        iso = next(r for r in iso_reference_plans() if r.covers(N))
        assert iso.plan == SamplingPlan(800, 10)
        assert plans
        assert all(p.n <= iso.plan.n and p.c <= iso.plan.c for p in plans)


class TestRecommendPlan:
    def test_min_sample(self):
        assert recommend_plan(5000, "min-sample").plan == SamplingPlan(42, 0)

    def test_min_producer_risk(self):
        rec = recommend_plan(5000, "min-producer-risk")
        assert rec.plan == SamplingPlan(88, 2)
        assert "not prescribed" in rec.note

    def test_partial_row(self):
        assert recommend_plan(400, "min-producer-risk").plan == SamplingPlan(63, 1)

    def test_full_inspection(self):
        rec = recommend_plan(12, "min-sample")
        assert rec.full_inspection
        assert rec.plan == SamplingPlan(12, 0)

    def test_unknown_preference(self):
        with pytest.raises(DomainError):
            recommend_plan(5000, "cheapest")

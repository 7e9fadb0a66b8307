from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siteselect import fixtures
from siteselect.errors import BadPredicateError, BadQueryError, UnknownFactorError
from siteselect.model import TimePoint
from siteselect.query import (
    ChecklistCriterion,
    Predicate,
    WhereQuery,
    checklist_score,
    compare_sites,
    lookup_what,
    search_when,
    search_where,
)
from siteselect.synth import generate_synthetic

from oracles import brute_force_when, brute_force_where

T0 = fixtures.T0


class TestPredicate:
    @pytest.mark.parametrize(
        "text,op,bounds",
        [
            ("population>=2500", "ge", (2500.0,)),
            ("supermarket_count = 0", "eq", (0.0,)),
            ("rate<7", "lt", (7.0,)),
            ("x <= 1.5e3", "le", (1500.0,)),
            ("income between 100 200", "between", (100.0, 200.0)),
        ],
    )
    def test_parse(self, text, op, bounds):
        pred = Predicate.parse(text)
        assert (pred.op, pred.bounds) == (op, bounds)

    def test_parse_rejects_garbage(self):
        with pytest.raises(BadPredicateError):
            Predicate.parse("population !! 5")

    def test_between_bounds_must_be_ordered(self):
        with pytest.raises(BadPredicateError):
            Predicate("f", "between", (5.0, 1.0))

    def test_absent_value_fails_every_predicate(self):
        assert not Predicate("f", "ge", (0.0,)).holds(None)


class TestLookupWhat:
    def test_income_identification(self, snap):
        result = lookup_what(snap, fixtures.GUETERSLOH, ["income_per_household"], T0)
        assert result["income_per_household"].value == 18_102

    def test_population_of_unna(self, snap):
        result = lookup_what(snap, fixtures.UNNA, ["population"], T0)
        assert result["population"].value == 416_679

    def test_before_first_observation_is_absent(self, snap):
        result = lookup_what(
            snap, fixtures.HAMBURG, ["unemployment_rate"], TimePoint(2016, 4), mode="latest_at_or_before"
        )
        assert result["unemployment_rate"].value is None

    def test_latest_at_or_before_picks_most_recent(self, snap):
        result = lookup_what(
            snap, fixtures.HAMBURG, ["unemployment_rate"], TimePoint(2017, 1), mode="latest_at_or_before"
        )
        assert result["unemployment_rate"].value == 7.1

    def test_latest_at_or_before_sees_subtree_times(self, snap):
        # county populations are stored at 2016-01; asking at mid-year rolls back
        result = lookup_what(snap, fixtures.NRW, ["population"], TimePoint(2016, 7), mode="latest_at_or_before")
        assert result["population"].value == 1_297_416

    def test_unknown_mode(self, snap):
        with pytest.raises(BadQueryError):
            lookup_what(snap, fixtures.UNNA, ["population"], T0, mode="fuzzy")


class TestSearchWhere:
    def test_population_ranking(self, snap):
        q = WhereQuery(level="county", t=T0, scope=fixtures.NRW, rank_by=(("population", "desc"),))
        matches = search_where(snap, q)
        assert [(m.name, m.values["population"].value) for m in matches] == [
            ("Unna", 416_679),
            ("Gütersloh", 353_944),
            ("Soest", 306_131),
            ("Coesfeld", 220_662),
        ]
        assert [m.rank for m in matches] == [1, 2, 3, 4]

    def test_supermarket_screening(self, snap):
        q = WhereQuery(
            level="district",
            t=T0,
            scope=fixtures.GUETERSLOH,
            predicates=(Predicate.parse("population>=2500"), Predicate.parse("supermarket_count=0")),
        )
        ids = [m.site_id for m in search_where(snap, q)]
        assert fixtures.HERZEBROCK_CLARHOLZ in ids
        assert fixtures.RHEDA_WIEDENBRUECK not in ids  # has supermarkets
        assert fixtures.LANGENBERG not in ids  # too small

    def test_impossible_predicate_yields_empty(self, snap):
        q = WhereQuery(level="county", t=T0, predicates=(Predicate.parse("population>1e9"),))
        assert search_where(snap, q) == []

    def test_limit_truncates(self, snap):
        q = WhereQuery(level="county", t=T0, rank_by=(("population", "desc"),), limit=2)
        assert [m.name for m in search_where(snap, q)] == ["Unna", "Gütersloh"]

    def test_unknown_rank_factor(self, snap):
        q = WhereQuery(level="county", t=T0, rank_by=(("ghost", "desc"),))
        with pytest.raises(UnknownFactorError):
            search_where(snap, q)

    def test_adding_predicate_never_enlarges_result(self, snap):
        base = WhereQuery(level="district", t=T0, scope=fixtures.GUETERSLOH)
        broad = {m.site_id for m in search_where(snap, base)}
        for extra in ("population>=2500", "supermarket_count=0", "population<100"):
            narrowed = WhereQuery(
                level="district", t=T0, scope=fixtures.GUETERSLOH, predicates=(Predicate.parse(extra),)
            )
            assert {m.site_id for m in search_where(snap, narrowed)} <= broad


class TestSearchWhen:
    def test_reference_line_scenario(self, snap):
        runs = search_when(snap, fixtures.HAMBURG, "unemployment_rate", Predicate.parse("unemployment_rate<7"))
        assert runs == [(TimePoint(2016, 6), TimePoint(2016, 6))]

    def test_predicate_matching_everything_spans_series(self, snap):
        runs = search_when(snap, fixtures.HAMBURG, "unemployment_rate", Predicate.parse("unemployment_rate<100"))
        assert runs == [(TimePoint(2016, 5), TimePoint(2016, 7))]

    def test_empty_series_yields_no_intervals(self, snap):
        assert search_when(snap, fixtures.HAMBURG, "population", Predicate.parse("population>0")) == []


class TestCompareSites:
    def test_population_vs_income_winners(self, snap):
        cmp = compare_sites(snap, [fixtures.UNNA, fixtures.GUETERSLOH], ["population", "income_per_household"], T0)
        assert cmp.rankings["population"][0] == fixtures.UNNA
        assert cmp.rankings["income_per_household"][0] == fixtures.GUETERSLOH

    def test_needs_two_sites(self, snap):
        with pytest.raises(BadQueryError):
            compare_sites(snap, [fixtures.UNNA], ["population"], T0)

    def test_tie_broken_by_site_id(self, snap):
        cmp = compare_sites(snap, [fixtures.SOEST, fixtures.COESFELD], ["supermarket_count"], T0)
        # neither county has supermarket data -> both excluded
        assert cmp.rankings["supermarket_count"] == []
        cmp2 = compare_sites(snap, ["05754020-1", "05754020-2"], ["households"], T0)
        assert cmp2.rankings["households"] == []

    def test_level_mismatch_warns_but_succeeds(self, snap):
        cmp = compare_sites(snap, [fixtures.NRW, fixtures.UNNA], ["population"], T0)
        assert cmp.warnings
        assert cmp.matrix[fixtures.NRW]["population"].value == 1_297_416

    def test_missing_value_excluded_from_ranking(self, snap):
        cmp = compare_sites(snap, [fixtures.UNNA, fixtures.COESFELD], ["income_per_household"], T0)
        assert cmp.matrix[fixtures.COESFELD]["income_per_household"].value is None
        assert cmp.rankings["income_per_household"] == [fixtures.UNNA]

    def test_agrees_with_search_where_ranking(self, snap):
        counties = [fixtures.COESFELD, fixtures.GUETERSLOH, fixtures.SOEST, fixtures.UNNA]
        cmp = compare_sites(snap, counties, ["population"], T0)
        q = WhereQuery(level="county", t=T0, scope=fixtures.NRW, rank_by=(("population", "desc"),))
        assert cmp.rankings["population"] == [m.site_id for m in search_where(snap, q)]


class TestChecklist:
    def test_worked_example_totals_and_ranking(self):
        snapshot, criteria, t = fixtures.checklist_example()
        table = checklist_score(snapshot, ["loc1", "loc2", "loc3"], criteria, t)
        assert table.ratings["loc1"] == {
            "availability_of_resources": "+",
            "income_structure": "+",
            "consumer_structure": "-",
            "infrastructure": "+",
            "taxes": "o",
        }
        assert table.totals == {"loc1": 2.0, "loc2": 1.0, "loc3": 3.0}
        assert table.ranking == ["loc3", "loc1", "loc2"]

    def test_absent_value_rates_minus_and_flags(self, snap):
        criteria = [ChecklistCriterion("income_per_household", 1.0, 15_000.0, 10_000.0)]
        table = checklist_score(snap, [fixtures.COESFELD], criteria, T0)
        assert table.ratings[fixtures.COESFELD]["income_per_household"] == "-"
        assert (fixtures.COESFELD, "income_per_household") in table.flagged

    def test_zero_weight_rejected(self):
        with pytest.raises(BadQueryError):
            ChecklistCriterion("f", 0.0, 1.0, 0.0)

    def test_inconsistent_thresholds_rejected(self):
        with pytest.raises(BadQueryError):
            ChecklistCriterion("f", 1.0, 10.0, 20.0)  # higher_is_better needs plus >= minus
        with pytest.raises(BadQueryError):
            ChecklistCriterion("f", 1.0, 20.0, 10.0, direction="lower_is_better")

    def test_soft_factor_never_scored(self, snap):
        with pytest.raises(BadQueryError):
            checklist_score(snap, [fixtures.UNNA], [ChecklistCriterion("prestige", 1.0, 1.0, 0.0)], T0)

    def test_empty_criteria_rejected(self, snap):
        with pytest.raises(BadQueryError):
            checklist_score(snap, [fixtures.UNNA], [], T0)

    @given(st.floats(min_value=0.001, max_value=1000.0, allow_nan=False))
    @settings(max_examples=30, deadline=None)
    def test_weight_scaling_preserves_ranking(self, scale):
        snapshot, criteria, t = fixtures.checklist_example()
        scaled = [
            ChecklistCriterion(c.factor_id, c.weight * scale, c.plus_threshold, c.minus_threshold, c.direction)
            for c in criteria
        ]
        base = checklist_score(snapshot, ["loc1", "loc2", "loc3"], criteria, t)
        rescaled = checklist_score(snapshot, ["loc1", "loc2", "loc3"], scaled, t)
        assert base.ranking == rescaled.ranking


def _random_query(rng, snapshot, bundle):
    level = rng.choice(snapshot.levels).ordinal
    scope = None
    if rng.random() < 0.4:
        scope = rng.choice(list(snapshot.sites))
    t = rng.choice(bundle.timepoints)
    factor_ids = [f.id for f in bundle.factors]
    predicates = []
    for _ in range(rng.randint(0, 2)):
        fid = rng.choice(factor_ids)
        op = rng.choice(["lt", "le", "eq", "ge", "gt", "between"])
        if op == "between":
            a, b = sorted((rng.uniform(0, 12_000), rng.uniform(0, 12_000)))
            predicates.append(Predicate(fid, op, (a, b)))
        else:
            predicates.append(Predicate(fid, op, (rng.uniform(0, 12_000),)))
    rank_by = []
    for _ in range(rng.randint(0, 2)):
        rank_by.append((rng.choice(factor_ids), rng.choice(["asc", "desc"])))
    limit = rng.choice([None, rng.randint(0, 20)])
    return WhereQuery(
        level=level, t=t, scope=scope, predicates=tuple(predicates), rank_by=tuple(rank_by), limit=limit
    )


class TestOracleEquivalence:
    """Spot checks; the full 100-seed sweep runs in the acceptance suite."""

    def test_where_matches_brute_force(self):
        rng = random.Random(42)
        for seed in range(10):
            bundle = generate_synthetic(
                [1, rng.randint(2, 4), rng.randint(4, 12)],
                factors=rng.randint(1, 4),
                timepoints=rng.randint(1, 6),
                seed=seed,
                missing_rate=rng.choice([0.0, 0.3]),
            )
            snapshot = bundle.to_snapshot()
            for _ in range(5):
                q = _random_query(rng, snapshot, bundle)
                got = [(m.site_id, m.rank) for m in search_where(snapshot, q)]
                assert got == brute_force_where(snapshot, q)

    def test_when_matches_brute_force(self):
        rng = random.Random(43)
        for seed in range(10):
            bundle = generate_synthetic([1, 3], factors=2, timepoints=rng.randint(2, 12), seed=seed)
            snapshot = bundle.to_snapshot()
            for sid in snapshot.sites:
                for fid in snapshot.factors:
                    points = snapshot.series_for(sid, fid)
                    bound = rng.uniform(0, 10_000)
                    pred = Predicate(fid, "lt", (bound,))
                    assert search_when(snapshot, sid, fid, pred) == brute_force_when(points, "lt", (bound,))

    def test_rank_stability_under_enumeration_order(self, snap):
        q = WhereQuery(level="county", t=T0, rank_by=(("supermarket_count", "asc"), ("population", "desc")))
        first = [(m.site_id, m.rank) for m in search_where(snap, q)]
        again = [(m.site_id, m.rank) for m in search_where(snap, q)]
        assert first == again == brute_force_where(snap, q)

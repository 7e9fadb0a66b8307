"""Built-in demo dataset: a small German administrative tree around the
supermarket site-selection case (NRW counties, the Gütersloh districts and
a Hamburg unemployment series), plus a worked checklist example.

County statistics are stored directly at the counties; the district
Herzebrock-Clarholz deliberately has no stored population so its total
(15,969) comes out of the roll-up over its three municipalities.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, List, Tuple

from .ingest import write_bundle
from .model import AdminLevel, DatasetSnapshot, FactorDefinition, FactorValue, Site, TimePoint, build_snapshot
from .query import ChecklistCriterion

T0 = TimePoint(2016, 1)

LEVELS = (
    AdminLevel(0, "nation"),
    AdminLevel(1, "state"),
    AdminLevel(2, "county"),
    AdminLevel(3, "district"),
    AdminLevel(4, "municipality"),
)

# Well-known fixture ids (AGS-style codes where real ones exist).
GERMANY = "DE"
NRW = "05"
HAMBURG = "02"
COESFELD = "05558"
GUETERSLOH = "05754"
SOEST = "05974"
UNNA = "05978"
HERZEBROCK_CLARHOLZ = "05754020"
RHEDA_WIEDENBRUECK = "05754036"
LANGENBERG = "05754024"

def _sites() -> List[Site]:
    lv = {l.ordinal: l for l in LEVELS}
    return [
        Site(GERMANY, "Germany", lv[0]),
        Site(NRW, "Nordrhein-Westfalen", lv[1], GERMANY),
        Site(HAMBURG, "Hamburg", lv[1], GERMANY),
        Site(COESFELD, "Coesfeld", lv[2], NRW),
        Site(GUETERSLOH, "Gütersloh", lv[2], NRW),
        Site(SOEST, "Soest", lv[2], NRW),
        Site(UNNA, "Unna", lv[2], NRW),
        Site(HERZEBROCK_CLARHOLZ, "Herzebrock-Clarholz", lv[3], GUETERSLOH),
        Site(RHEDA_WIEDENBRUECK, "Rheda-Wiedenbrück", lv[3], GUETERSLOH),
        Site(LANGENBERG, "Langenberg", lv[3], GUETERSLOH),
        Site("05754020-1", "Herzebrock", lv[4], HERZEBROCK_CLARHOLZ),
        Site("05754020-2", "Clarholz", lv[4], HERZEBROCK_CLARHOLZ),
        Site("05754020-3", "Möhler", lv[4], HERZEBROCK_CLARHOLZ),
    ]


def _factors() -> List[FactorDefinition]:
    return [
        FactorDefinition(
            "population", "Population", "Markets", "inhabitants",
            kind="hard", aggregation="sum", direction_hint="higher_is_better",
        ),
        FactorDefinition(
            "households", "Private households", "Markets", "households",
            kind="hard", aggregation="sum", direction_hint="neutral",
        ),
        FactorDefinition(
            "income_per_household", "Available income per household", "Markets", "EUR",
            kind="hard", aggregation="weighted_mean", weight_factor_id="households",
            direction_hint="higher_is_better",
        ),
        FactorDefinition(
            "supermarket_count", "Existing supermarkets", "Markets", "stores",
            kind="hard", aggregation="sum", direction_hint="lower_is_better",
        ),
        FactorDefinition(
            "unemployment_rate", "Unemployment rate", "Labor", "%",
            kind="hard", aggregation="none", direction_hint="lower_is_better",
        ),
        FactorDefinition(
            "prestige", "Site prestige", "Other", "",
            kind="soft", aggregation="none", direction_hint="neutral",
        ),
    ]


def _values() -> List[FactorValue]:
    rows: List[Tuple[str, str, TimePoint, float]] = [
        # county population history; 2016-01 carries the case-study figures
        (COESFELD, "population", TimePoint(2014, 1), 218_000),
        (COESFELD, "population", TimePoint(2015, 1), 219_500),
        (COESFELD, "population", T0, 220_662),
        (GUETERSLOH, "population", TimePoint(2014, 1), 350_100),
        (GUETERSLOH, "population", TimePoint(2015, 1), 352_000),
        (GUETERSLOH, "population", T0, 353_944),
        (SOEST, "population", TimePoint(2014, 1), 305_000),
        (SOEST, "population", TimePoint(2015, 1), 305_600),
        (SOEST, "population", T0, 306_131),
        (UNNA, "population", TimePoint(2014, 1), 414_000),
        (UNNA, "population", TimePoint(2015, 1), 415_300),
        (UNNA, "population", T0, 416_679),
        # income per private household (stored where the case gives figures)
        (GUETERSLOH, "income_per_household", T0, 18_102),
        (UNNA, "income_per_household", T0, 14_451),
        (HERZEBROCK_CLARHOLZ, "income_per_household", T0, 53_310),
        # Herzebrock-Clarholz: no stored population; municipalities sum to 15,969
        ("05754020-1", "population", T0, 6_000),
        ("05754020-2", "population", T0, 4_969),
        ("05754020-3", "population", T0, 5_000),
        (HERZEBROCK_CLARHOLZ, "households", T0, 6_497),
        # district screening data: supermarkets and neighbor districts
        (HERZEBROCK_CLARHOLZ, "supermarket_count", T0, 0),
        (RHEDA_WIEDENBRUECK, "supermarket_count", T0, 7),
        (LANGENBERG, "supermarket_count", T0, 0),
        (RHEDA_WIEDENBRUECK, "population", T0, 48_613),
        (LANGENBERG, "population", T0, 2_100),
        # Hamburg unemployment series for the reference-line scenario
        (HAMBURG, "unemployment_rate", TimePoint(2016, 5), 7.2),
        (HAMBURG, "unemployment_rate", TimePoint(2016, 6), 6.9),
        (HAMBURG, "unemployment_rate", TimePoint(2016, 7), 7.1),
    ]
    return [FactorValue(sid, fid, t, float(v)) for sid, fid, t, v in rows]


def _box(x0: float, y0: float, x1: float, y1: float) -> dict:
    return {"type": "Polygon", "coordinates": [[[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]]}


def _geometries() -> Dict[str, dict]:
    geoms = {
        GERMANY: _box(6.0, 47.0, 15.0, 55.0),
        NRW: _box(6.0, 50.3, 9.5, 52.5),
        HAMBURG: _box(9.7, 53.4, 10.3, 53.8),
        COESFELD: _box(6.8, 51.7, 7.4, 52.2),
        GUETERSLOH: _box(8.0, 51.8, 8.6, 52.2),
        SOEST: _box(8.0, 51.3, 8.6, 51.7),
        UNNA: _box(7.5, 51.4, 7.9, 51.7),
        HERZEBROCK_CLARHOLZ: _box(8.0, 51.8, 8.2, 52.2),
        RHEDA_WIEDENBRUECK: _box(8.2, 51.8, 8.4, 52.2),
        LANGENBERG: _box(8.4, 51.8, 8.6, 52.2),
        "05754020-1": _box(8.0, 51.8, 8.0667, 52.2),
        "05754020-2": _box(8.0667, 51.8, 8.1333, 52.2),
        "05754020-3": _box(8.1333, 51.8, 8.2, 52.2),
    }
    return geoms


def fixture_snapshot() -> DatasetSnapshot:
    """The demo dataset as an in-memory snapshot."""
    return build_snapshot(
        sites=_sites(),
        factors=_factors(),
        values=_values(),
        geometries=_geometries(),
        levels=LEVELS,
        source="fixture-nrw-supermarkets",
        default_t=T0,
    )


def write_fixture_bundle(out_dir) -> Path:
    """Write the demo dataset as a loadable bundle; returns the manifest path."""
    return write_bundle(
        out_dir,
        levels=LEVELS,
        sites=_sites(),
        factors=_factors(),
        values=_values(),
        geometries=_geometries(),
        source="fixture-nrw-supermarkets",
        default_t=T0,
    )


def checklist_example() -> Tuple[DatasetSnapshot, List[ChecklistCriterion], TimePoint]:
    """Three candidate locations scored on five unit-weight criteria; the
    expected ratings form the classic worked checklist (totals 2 / 1 / 3).
    """
    level = AdminLevel(0, "location")
    sites = [
        Site("loc1", "Location 1", level),
        Site("loc2", "Location 2", level),
        Site("loc3", "Location 3", level),
    ]
    factors = [
        FactorDefinition("availability_of_resources", "Availability of Resources", "Raw Materials", "index"),
        FactorDefinition("income_structure", "Income Structure", "Markets", "index"),
        FactorDefinition("consumer_structure", "Consumer Structure", "Markets", "index"),
        FactorDefinition("infrastructure", "Infrastructure", "Transportation", "index"),
        FactorDefinition("taxes", "Taxes", "Tax Structure", "index", direction_hint="lower_is_better"),
    ]
    t = TimePoint(2016, 1)
    raw = {
        "availability_of_resources": {"loc1": 80, "loc2": 75, "loc3": 50},
        "income_structure": {"loc1": 90, "loc2": 20, "loc3": 85},
        "consumer_structure": {"loc1": 10, "loc2": 45, "loc3": 60},
        "infrastructure": {"loc1": 70, "loc2": 95, "loc3": 71},
        "taxes": {"loc1": 30, "loc2": 35, "loc3": 10},
    }
    values = [
        FactorValue(sid, fid, t, float(v)) for fid, by_site in raw.items() for sid, v in by_site.items()
    ]
    snapshot = build_snapshot(
        sites=sites, factors=factors, values=values, levels=[level], source="checklist-example", default_t=t
    )
    criteria = [
        ChecklistCriterion("availability_of_resources", 1.0, 70.0, 40.0),
        ChecklistCriterion("income_structure", 1.0, 70.0, 40.0),
        ChecklistCriterion("consumer_structure", 1.0, 70.0, 40.0),
        ChecklistCriterion("infrastructure", 1.0, 70.0, 40.0),
        ChecklistCriterion("taxes", 1.0, 20.0, 40.0, direction="lower_is_better"),
    ]
    return snapshot, criteria, t


def write_checklist_criteria(path, criteria: List[ChecklistCriterion]) -> Path:
    """Serialize criteria to the JSON format the CLI `checklist` command reads."""
    doc = [
        {
            "factor": c.factor_id,
            "weight": c.weight,
            "plus_threshold": c.plus_threshold,
            "minus_threshold": c.minus_threshold,
            "direction": c.direction,
        }
        for c in criteria
    ]
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path

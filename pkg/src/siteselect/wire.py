"""JSON document builders for the HTTP API and CLI output.

Field order inside each document is fixed so serialized responses are
byte-stable for contract tests. Times travel as ISO "YYYY-MM" strings.
"""

from __future__ import annotations

from typing import Optional

from .errors import BadQueryError
from .hierarchy import AggregatedValue
from .model import DatasetSnapshot, FactorDefinition, Site, TimePoint
from .query import ChecklistTable, Comparison, SiteMatch
from .views import ChoroplethLayer, ChildStatistics, DataTable, InsightCharts, SeriesView


def parse_time(text: str) -> TimePoint:
    try:
        return TimePoint.parse(text)
    except ValueError as exc:
        raise BadQueryError(str(exc)) from exc


def site_doc(site: Site) -> dict:
    return {
        "id": site.id,
        "name": site.name,
        "level": site.level.name,
        "level_ordinal": site.level.ordinal,
        "parent": site.parent_id,
        "has_geometry": site.geometry_ref is not None,
    }


def factor_doc(factor: FactorDefinition) -> dict:
    return {
        "id": factor.id,
        "name": factor.name,
        "category": factor.category,
        "unit": factor.unit,
        "kind": factor.kind,
        "aggregation": factor.aggregation,
        "weight_factor": factor.weight_factor_id,
        "direction": factor.direction_hint,
    }


def agg_doc(agg: AggregatedValue) -> dict:
    return {"value": agg.value, "coverage": agg.coverage, "partial": agg.partial}


def match_doc(match: SiteMatch) -> dict:
    return {
        "site": match.site_id,
        "name": match.name,
        "rank": match.rank,
        "values": {fid: agg_doc(a) for fid, a in sorted(match.values.items())},
    }


def comparison_doc(cmp: Comparison) -> dict:
    return {
        "sites": list(cmp.site_ids),
        "factors": list(cmp.factor_ids),
        "matrix": {sid: {fid: agg_doc(a) for fid, a in cells.items()} for sid, cells in cmp.matrix.items()},
        "rankings": dict(cmp.rankings),
        "warnings": list(cmp.warnings),
    }


def checklist_doc(table: ChecklistTable) -> dict:
    return {
        "criteria": [
            {
                "factor": c.factor_id,
                "weight": c.weight,
                "plus_threshold": c.plus_threshold,
                "minus_threshold": c.minus_threshold,
                "direction": c.direction,
            }
            for c in table.criteria
        ],
        "ratings": {sid: dict(r) for sid, r in table.ratings.items()},
        "totals": dict(table.totals),
        "ranking": list(table.ranking),
        "flagged": [list(pair) for pair in table.flagged],
    }


def insights_doc(charts: InsightCharts) -> dict:
    return {
        "pie": {
            "factor": charts.pie_factor_id,
            "slices": [
                {"site": s.site_id, "value": s.value, "proportion": s.proportion} for s in charts.pie
            ],
            "missing": list(charts.pie_missing),
        },
        "bars": {
            "items": [{"site": b.site_id, "factor": b.factor_id, "value": b.value} for b in charts.bars],
            "scale": dict(sorted(charts.bar_scale.items())),
            "missing": [list(pair) for pair in charts.bar_missing],
        },
    }


def stats_doc(stats: ChildStatistics) -> dict:
    return {
        "mean": stats.mean,
        "min": stats.min,
        "max": stats.max,
        "stddev": stats.stddev,
        "n": stats.n,
    }


def series_doc(view: SeriesView, site_id: str) -> dict:
    return {
        "site": site_id,
        "factor": view.factor_id,
        "points": [{"t": t.isoformat(), "value": v} for t, v in view.series[site_id]],
    }


def choropleth_doc(layer: ChoroplethLayer) -> dict:
    return {
        "parent": layer.parent_id,
        "factor": layer.factor_id,
        "t": layer.t.isoformat(),
        "scheme": layer.scheme,
        "k": layer.k,
        "breaks": list(layer.breaks),
        "legend": list(layer.legend),
        "sites": [
            {
                "site": s.site_id,
                "name": s.name,
                "value": s.value,
                "coverage": s.coverage,
                "class": s.class_index,
                "geometry_ref": s.geometry_ref,
            }
            for s in layer.sites
        ],
    }


def table_doc(table: DataTable) -> dict:
    return {
        "factors": list(table.factor_ids),
        "units": dict(table.units),
        "rows": [
            {"site": sid, "name": name, "cells": {fid: agg_doc(a) for fid, a in cells.items()}}
            for sid, name, cells in table.rows
        ],
    }


def geometry_feature(snapshot: DatasetSnapshot, site: Site) -> Optional[dict]:
    if site.geometry_ref is None:
        return None
    geom = snapshot.geometries.get(site.geometry_ref)
    if geom is None:
        return None
    return {
        "type": "Feature",
        "properties": {"site_id": site.id, "name": site.name},
        "geometry": geom,
    }

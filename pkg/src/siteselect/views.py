"""View-ready transforms: choropleth classification, time-series views with
reference lines, insight charts (pie/bars), per-children statistics and the
raw data table.
"""

from __future__ import annotations

import statistics
from bisect import bisect_left
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BadQueryError, ChildlessParentError
from .hierarchy import AggregatedValue, _require_factor, _require_site, aggregate_value, children
from .model import DatasetSnapshot, TimePoint

SCHEMES = ("quantile", "equal_interval")


def format_number(v: float) -> str:
    """Locale-independent, lossless display: integral values lose the
    decimal point, everything else uses the shortest exact repr.
    """
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


@dataclass(frozen=True)
class ClassBreaks:
    """k-class classification: k-1 ascending break values; classes 0..k-1,
    -1 for no-data. A value equal to a break falls in the lower class.
    """

    scheme: str
    k: int
    breaks: Tuple[float, ...]
    classes: Dict[str, int]  # site id -> class index


def classify(values: Sequence[Tuple[str, Optional[float]]], scheme: str, k: int) -> ClassBreaks:
    """Split sites into k classes by value.

    equal_interval cuts [min, max] into k equal spans; quantile puts breaks
    at the i*n/k order statistics. All-equal inputs collapse to class 0;
    an empty input yields no breaks and everything no-data.
    """
    if scheme not in SCHEMES:
        raise BadQueryError(f"unknown classification scheme: {scheme!r}")
    if not 2 <= k <= 9:
        raise BadQueryError(f"class count k must be in [2, 9], got {k}")

    present = sorted(v for _, v in values if v is not None)
    if not present:
        return ClassBreaks(scheme=scheme, k=k, breaks=(), classes={sid: -1 for sid, _ in values})

    n = len(present)
    lo, hi = present[0], present[-1]
    if scheme == "equal_interval":
        span = hi - lo
        breaks = tuple(lo + i * span / k for i in range(1, k))
    else:
        # order statistic at ceil(i*n/k), 1-indexed
        breaks = tuple(present[-(-i * n // k) - 1] for i in range(1, k))

    classes = {
        sid: (-1 if v is None else bisect_left(breaks, v)) for sid, v in values
    }
    return ClassBreaks(scheme=scheme, k=k, breaks=breaks, classes=classes)


@dataclass(frozen=True)
class ChoroplethSite:
    site_id: str
    name: str
    value: Optional[float]
    coverage: float
    class_index: int
    geometry_ref: Optional[str]


@dataclass(frozen=True)
class ChoroplethLayer:
    parent_id: str
    factor_id: str
    t: TimePoint
    scheme: str
    k: int
    breaks: Tuple[float, ...]
    legend: Tuple[str, ...]
    sites: Tuple[ChoroplethSite, ...]  # exactly children(parent), in child order


def _legend_labels(breaks: Tuple[float, ...], k: int, unit: str) -> Tuple[str, ...]:
    suffix = f" {unit}" if unit else ""
    if not breaks:
        return tuple(f"class {j}" for j in range(k))
    labels = [f"<= {format_number(breaks[0])}{suffix}"]
    for j in range(1, k - 1):
        labels.append(f"{format_number(breaks[j - 1])} - {format_number(breaks[j])}{suffix}")
    labels.append(f"> {format_number(breaks[-1])}{suffix}")
    return tuple(labels)


def build_choropleth(
    snapshot: DatasetSnapshot,
    parent_id: str,
    factor_id: str,
    t: TimePoint,
    scheme: str = "quantile",
    k: int = 5,
) -> ChoroplethLayer:
    """Classified map layer over the children of one site (one factor, one t)."""
    _require_site(snapshot, parent_id)
    factor = _require_factor(snapshot, factor_id)
    kids = children(snapshot, parent_id)
    if not kids:
        raise ChildlessParentError(parent_id)

    aggs = {site.id: aggregate_value(snapshot, site.id, factor_id, t) for site in kids}
    breaks = classify([(site.id, aggs[site.id].value) for site in kids], scheme, k)
    sites = tuple(
        ChoroplethSite(
            site_id=site.id,
            name=site.name,
            value=aggs[site.id].value,
            coverage=aggs[site.id].coverage,
            class_index=breaks.classes[site.id],
            geometry_ref=site.geometry_ref,
        )
        for site in kids
    )
    return ChoroplethLayer(
        parent_id=parent_id,
        factor_id=factor_id,
        t=t,
        scheme=scheme,
        k=k,
        breaks=breaks.breaks,
        legend=_legend_labels(breaks.breaks, k, factor.unit),
        sites=sites,
    )


@dataclass(frozen=True)
class SeriesView:
    factor_id: str
    series: Dict[str, Tuple[Tuple[TimePoint, float], ...]]  # site -> time-ordered points
    reference: Optional[float] = None
    highlight: Optional[str] = None


def build_series_view(
    snapshot: DatasetSnapshot,
    site_ids: Sequence[str],
    factor_id: str,
    t_range: Tuple[Optional[TimePoint], Optional[TimePoint]] = (None, None),
    reference: Optional[float] = None,
    highlight: Optional[str] = None,
) -> SeriesView:
    """Stored series per site clipped to the closed t_range; sites without
    observations appear with empty point lists. Reference value and highlight
    site pass straight through to the view.
    """
    _require_factor(snapshot, factor_id)
    for sid in site_ids:
        _require_site(snapshot, sid)
    if highlight is not None:
        _require_site(snapshot, highlight)
    start, end = t_range
    if start is not None and end is not None and start > end:
        raise BadQueryError(f"inverted time range: {start} > {end}")

    series = {}
    for sid in site_ids:
        points = snapshot.series_for(sid, factor_id)
        series[sid] = tuple(
            (t, v)
            for t, v in points
            if (start is None or t >= start) and (end is None or t <= end)
        )
    return SeriesView(factor_id=factor_id, series=series, reference=reference, highlight=highlight)


@dataclass(frozen=True)
class PieSlice:
    site_id: str
    value: float
    proportion: float


@dataclass(frozen=True)
class BarItem:
    site_id: str
    factor_id: str
    value: float


@dataclass(frozen=True)
class InsightCharts:
    """Pie over the first selected factor (mixing units in one pie is
    meaningless); bars for every (site, factor) pair with per-factor scale.
    """

    pie_factor_id: str
    pie: Tuple[PieSlice, ...]
    pie_missing: Tuple[str, ...]
    bars: Tuple[BarItem, ...]
    bar_scale: Dict[str, float]  # factor -> max |value| among shown bars
    bar_missing: Tuple[Tuple[str, str], ...]


def build_insights(
    snapshot: DatasetSnapshot,
    site_ids: Sequence[str],
    factor_ids: Sequence[str],
    t: TimePoint,
) -> InsightCharts:
    if not site_ids or not factor_ids:
        raise BadQueryError("insights need at least one site and one factor")
    for sid in site_ids:
        _require_site(snapshot, sid)
    for fid in factor_ids:
        _require_factor(snapshot, fid)

    primary = factor_ids[0]
    values = {
        (sid, fid): aggregate_value(snapshot, sid, fid, t).value
        for sid in site_ids
        for fid in factor_ids
    }

    present = [(sid, values[(sid, primary)]) for sid in site_ids if values[(sid, primary)] is not None]
    pie_missing = tuple(sid for sid in site_ids if values[(sid, primary)] is None)
    total = sum(v for _, v in present)
    if present and total > 0:
        pie = tuple(PieSlice(sid, v, v / total) for sid, v in present)
    else:
        pie = ()

    bars = []
    bar_missing = []
    bar_scale: Dict[str, float] = {}
    for fid in factor_ids:
        for sid in site_ids:
            v = values[(sid, fid)]
            if v is None:
                bar_missing.append((sid, fid))
            else:
                bars.append(BarItem(sid, fid, v))
                bar_scale[fid] = max(bar_scale.get(fid, 0.0), abs(v))
    return InsightCharts(
        pie_factor_id=primary,
        pie=pie,
        pie_missing=pie_missing,
        bars=tuple(bars),
        bar_scale=bar_scale,
        bar_missing=tuple(bar_missing),
    )


@dataclass(frozen=True)
class ChildStatistics:
    mean: Optional[float]
    min: Optional[float]
    max: Optional[float]
    stddev: Optional[float]  # population standard deviation
    n: int


def child_statistics(
    snapshot: DatasetSnapshot, site_id: str, factor_id: str, t: TimePoint
) -> ChildStatistics:
    """Mean/min/max/stddev over the children's aggregate values present at t.
    Children are the complete population of subdivisions, hence population
    (not sample) standard deviation.
    """
    _require_site(snapshot, site_id)
    _require_factor(snapshot, factor_id)
    values = [
        agg.value
        for site in children(snapshot, site_id)
        if (agg := aggregate_value(snapshot, site.id, factor_id, t)).value is not None
    ]
    if not values:
        return ChildStatistics(mean=None, min=None, max=None, stddev=None, n=0)
    return ChildStatistics(
        mean=statistics.fmean(values),
        min=min(values),
        max=max(values),
        stddev=statistics.pstdev(values),
        n=len(values),
    )


@dataclass(frozen=True)
class DataTable:
    factor_ids: Tuple[str, ...]
    units: Dict[str, str]
    rows: Tuple[Tuple[str, str, Dict[str, AggregatedValue]], ...]  # (site id, name, cells)


def data_table(
    snapshot: DatasetSnapshot,
    site_ids: Sequence[str],
    factor_ids: Sequence[str],
    t: TimePoint,
) -> DataTable:
    """One row per site, one cell per factor; absent cells stay absent
    (never zero) and keep their coverage flags.
    """
    for sid in site_ids:
        _require_site(snapshot, sid)
    for fid in factor_ids:
        _require_factor(snapshot, fid)
    rows = tuple(
        (
            sid,
            snapshot.sites[sid].name,
            {fid: aggregate_value(snapshot, sid, fid, t) for fid in factor_ids},
        )
        for sid in site_ids
    )
    return DataTable(
        factor_ids=tuple(factor_ids),
        units={fid: snapshot.factors[fid].unit for fid in factor_ids},
        rows=rows,
    )

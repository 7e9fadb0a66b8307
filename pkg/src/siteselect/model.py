"""Core domain types: administrative sites, location factors, timestamped
values and the immutable, fully indexed dataset snapshot they load into.

Levels are data, not code: the level list ships with each dataset, so any
national hierarchy (not just state/county/district/municipality) loads
unchanged.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional, Sequence

from .errors import BundleError

# Factor catalog categories (hard-coded taxonomy; "Other" is the catch-all).
CATEGORIES = frozenset(
    {
        "Transportation",
        "Labor",
        "Raw Materials",
        "Markets",
        "Industrial Site",
        "Utilities",
        "Government Attitude",
        "Tax Structure",
        "Climate & Ecology",
        "Other",
    }
)

AGGREGATIONS = frozenset({"sum", "mean", "weighted_mean", "none"})
KINDS = frozenset({"hard", "soft"})
DIRECTIONS = frozenset({"higher_is_better", "lower_is_better", "neutral"})

_TIME_RE = re.compile(r"^(\d{4})(?:-(\d{1,2}))?$")


@dataclass(frozen=True, order=True)
class TimePoint:
    """A month-granular instant, totally ordered by (year, month)."""

    year: int
    month: int = 1

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"invalid month: {self.month}")

    @classmethod
    def parse(cls, text: str) -> "TimePoint":
        """Parse 'YYYY' or 'YYYY-MM'; year-only input normalizes to month 1."""
        m = _TIME_RE.match(text.strip())
        if not m:
            raise ValueError(f"unparsable time: {text!r}")
        year = int(m.group(1))
        month = int(m.group(2)) if m.group(2) else 1
        return cls(year, month)

    def isoformat(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    def __str__(self) -> str:
        return self.isoformat()


@dataclass(frozen=True)
class AdminLevel:
    ordinal: int
    name: str


@dataclass(frozen=True)
class Site:
    """One node of the administrative hierarchy. Roots carry level ordinal 0."""

    id: str
    name: str
    level: AdminLevel
    parent_id: Optional[str] = None
    geometry_ref: Optional[str] = None


@dataclass(frozen=True)
class FactorDefinition:
    """A location factor's identity, unit and roll-up rule.

    `aggregation` is one of sum | mean | weighted_mean | none; weighted_mean
    carries the id of the weight factor (which must aggregate by sum).
    Soft factors are catalog metadata only and never aggregate or score.
    """

    id: str
    name: str
    category: str
    unit: str
    kind: str = "hard"
    aggregation: str = "none"
    weight_factor_id: Optional[str] = None
    direction_hint: str = "neutral"


@dataclass(frozen=True)
class FactorValue:
    site_id: str
    factor_id: str
    t: TimePoint
    value: float


@dataclass(frozen=True)
class Issue:
    """One validation finding. Violations are data, not faults."""

    severity: str  # "error" | "warning"
    rule: str
    subject: str
    message: str


class ValidationReport(list):
    """List of Issues; empty means the input is a valid snapshot."""

    @property
    def errors(self) -> list:
        return [i for i in self if i.severity == "error"]

    @property
    def warnings(self) -> list:
        return [i for i in self if i.severity == "warning"]

    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class Provenance:
    source: str
    loaded_at: str  # ISO timestamp; process-local, never serialized to the wire
    stamp: str  # content hash: identical bundle bytes yield an identical stamp


class DatasetSnapshot:
    """Immutable, fully indexed bundle of sites + factors + values + geometries.

    Safe to share across concurrent readers; all iteration orders are
    deterministic functions of the content (never of input file order).
    """

    def __init__(
        self,
        levels: Sequence[AdminLevel],
        sites: Mapping[str, Site],
        factors: Mapping[str, FactorDefinition],
        series: Mapping[tuple, tuple],
        geometries: Mapping[str, dict],
        provenance: Provenance,
        default_t: Optional[TimePoint] = None,
    ):
        self.levels = tuple(sorted(levels, key=lambda lv: lv.ordinal))
        self.level_by_ordinal = {lv.ordinal: lv for lv in self.levels}
        self.level_by_name = {lv.name: lv for lv in self.levels}
        self.sites = dict(sorted(sites.items()))
        self.factors = dict(sorted(factors.items()))
        self.series = dict(sorted(series.items()))
        self.geometries = dict(sorted(geometries.items()))
        self.provenance = provenance
        self.default_t = default_t

        self.children_ids: dict = {sid: [] for sid in self.sites}
        self.root_ids: list = []
        for site in self.sites.values():
            if site.parent_id is None:
                self.root_ids.append(site.id)
            else:
                self.children_ids[site.parent_id].append(site.id)
        by_display = lambda sid: (self.sites[sid].name, sid)
        self.root_ids.sort(key=by_display)
        for ids in self.children_ids.values():
            ids.sort(key=by_display)

        self.sites_by_level: dict = {lv.ordinal: [] for lv in self.levels}
        for site in self.sites.values():
            self.sites_by_level[site.level.ordinal].append(site.id)
        for ids in self.sites_by_level.values():
            ids.sort(key=by_display)

        # Lazy per-snapshot caches; values are pure functions of content,
        # so racing writers are benign.
        self._leaf_count_cache: dict = {}
        self._agg_cache: dict = {}

    @property
    def value_count(self) -> int:
        return sum(len(points) for points in self.series.values())

    def site(self, site_id: str) -> Site:
        return self.sites[site_id]

    def series_for(self, site_id: str, factor_id: str) -> tuple:
        """Ordered (TimePoint, value) pairs; empty tuple when nothing stored."""
        return self.series.get((site_id, factor_id), ())

    def stored_value(self, site_id: str, factor_id: str, t: TimePoint):
        for point_t, value in self.series_for(site_id, factor_id):
            if point_t == t:
                return value
            if point_t > t:
                return None
        return None


def _check_geometry(geom: dict) -> Optional[str]:
    """Structural WGS84 polygon check; returns a problem string or None.

    Self-intersection is not checked (no geometry dependency); ring closure,
    arity and coordinate ranges are.
    """
    if not isinstance(geom, dict):
        return "geometry is not an object"
    gtype = geom.get("type")
    if gtype == "Polygon":
        polys = [geom.get("coordinates")]
    elif gtype == "MultiPolygon":
        polys = geom.get("coordinates")
    else:
        return f"unsupported geometry type: {gtype!r}"
    if not isinstance(polys, list) or not polys:
        return "missing coordinates"
    for poly in polys:
        if not isinstance(poly, list) or not poly:
            return "polygon without rings"
        for ring in poly:
            if not isinstance(ring, list) or len(ring) < 4:
                return "ring with fewer than 4 positions"
            if ring[0] != ring[-1]:
                return "ring not closed"
            for pos in ring:
                if not isinstance(pos, (list, tuple)) or len(pos) < 2:
                    return "malformed position"
                lon, lat = pos[0], pos[1]
                if not (isinstance(lon, (int, float)) and isinstance(lat, (int, float))):
                    return "non-numeric coordinate"
                if not (math.isfinite(lon) and math.isfinite(lat)):
                    return "non-finite coordinate"
                if not (-180.0 <= lon <= 180.0 and -90.0 <= lat <= 90.0):
                    return "coordinate outside WGS84 bounds"
    return None


def validate_snapshot(
    sites: Iterable[Site],
    factors: Iterable[FactorDefinition],
    values: Iterable[FactorValue],
    geometries: Optional[Mapping[str, dict]] = None,
    levels: Optional[Sequence[AdminLevel]] = None,
) -> ValidationReport:
    """Check every invariant; the report lists each violation with the
    offending id and a rule name. Empty report = valid input.
    """
    report = ValidationReport()
    err = lambda rule, subject, msg: report.append(Issue("error", rule, subject, msg))
    warn = lambda rule, subject, msg: report.append(Issue("warning", rule, subject, msg))

    sites = list(sites)
    factors = list(factors)
    values = list(values)

    if levels is None:
        seen = {s.level.ordinal: s.level for s in sites}
        levels = [seen[o] for o in sorted(seen)]
    ordinals = sorted(lv.ordinal for lv in levels)
    if ordinals and ordinals != list(range(len(ordinals))):
        err("levels_not_contiguous", "levels", f"level ordinals {ordinals} are not contiguous from 0")
    known_ordinals = {lv.ordinal for lv in levels}

    by_id: dict = {}
    for site in sites:
        if site.id in by_id:
            err("duplicate_site_id", site.id, f"duplicate site id {site.id!r}")
            continue
        by_id[site.id] = site
        if site.level.ordinal not in known_ordinals:
            err("unknown_level", site.id, f"site {site.id!r} has undeclared level {site.level.name!r}")

    for site in by_id.values():
        if site.parent_id is None:
            if site.level.ordinal != 0:
                err("missing_parent", site.id, f"non-root site {site.id!r} has no parent")
            continue
        if site.level.ordinal == 0:
            err("root_with_parent", site.id, f"level-0 site {site.id!r} must not have a parent")
        parent = by_id.get(site.parent_id)
        if parent is None:
            err("unresolved_parent", site.id, f"site {site.id!r} references missing parent {site.parent_id!r}")
        elif site.level.ordinal != parent.level.ordinal + 1:
            err(
                "level_step",
                site.id,
                f"site {site.id!r} at level {site.level.ordinal} under parent at level {parent.level.ordinal}",
            )

    # Parent chains must terminate (acyclic forest).
    state: dict = {}  # site id -> "visiting" | "done"
    for start in by_id:
        chain = []
        cur = start
        while cur is not None and state.get(cur) is None and cur in by_id:
            state[cur] = "visiting"
            chain.append(cur)
            cur = by_id[cur].parent_id
        if cur is not None and state.get(cur) == "visiting":
            err("parent_cycle", cur, f"parent chain through {cur!r} is cyclic")
        for sid in chain:
            state[sid] = "done"

    factor_by_id: dict = {}
    for f in factors:
        if f.id in factor_by_id:
            err("duplicate_factor_id", f.id, f"duplicate factor id {f.id!r}")
            continue
        factor_by_id[f.id] = f
        if f.category not in CATEGORIES:
            err("unknown_category", f.id, f"factor {f.id!r} has unknown category {f.category!r}")
        if f.kind not in KINDS:
            err("bad_kind", f.id, f"factor {f.id!r} has unknown kind {f.kind!r}")
        if f.aggregation not in AGGREGATIONS:
            err("bad_aggregation", f.id, f"factor {f.id!r} has unknown aggregation {f.aggregation!r}")
        if f.direction_hint not in DIRECTIONS:
            err("bad_direction", f.id, f"factor {f.id!r} has unknown direction {f.direction_hint!r}")
        if f.kind == "soft" and f.aggregation != "none":
            err("soft_aggregation", f.id, f"soft factor {f.id!r} must not aggregate")
        if f.aggregation == "weighted_mean" and f.weight_factor_id is None:
            err("missing_weight_factor", f.id, f"factor {f.id!r} is weighted_mean without a weight factor")
        if f.aggregation != "weighted_mean" and f.weight_factor_id is not None:
            err("unexpected_weight_factor", f.id, f"factor {f.id!r} carries a weight factor but is not weighted_mean")

    for f in factor_by_id.values():
        if f.aggregation == "weighted_mean" and f.weight_factor_id is not None:
            weight = factor_by_id.get(f.weight_factor_id)
            if weight is None:
                err("bad_weight_factor", f.id, f"factor {f.id!r} references missing weight factor {f.weight_factor_id!r}")
            elif weight.aggregation != "sum":
                err("bad_weight_factor", f.id, f"weight factor {weight.id!r} must aggregate by sum, not {weight.aggregation!r}")

    seen_keys = set()
    for v in values:
        subject = f"{v.site_id}/{v.factor_id}@{v.t}"
        if v.site_id not in by_id:
            err("value_unknown_site", subject, f"observation references missing site {v.site_id!r}")
        if v.factor_id not in factor_by_id:
            err("value_unknown_factor", subject, f"observation references missing factor {v.factor_id!r}")
        key = (v.site_id, v.factor_id, v.t)
        if key in seen_keys:
            err("duplicate_observation", subject, f"duplicate observation for {subject}")
        seen_keys.add(key)
        if not isinstance(v.value, (int, float)) or not math.isfinite(v.value):
            err("nonfinite_value", subject, f"observation {subject} has non-finite value {v.value!r}")

    for sid, geom in (geometries or {}).items():
        if sid not in by_id:
            warn("geometry_unknown_site", sid, f"geometry for unknown site {sid!r} ignored")
            continue
        problem = _check_geometry(geom)
        if problem:
            err("bad_geometry", sid, f"geometry for site {sid!r}: {problem}")

    return report


def _canonical_content(levels, sites, factors, values, geometries, default_t) -> bytes:
    doc = {
        "levels": [[lv.ordinal, lv.name] for lv in sorted(levels, key=lambda l: l.ordinal)],
        "sites": [
            [s.id, s.name, s.level.ordinal, s.parent_id] for s in sorted(sites, key=lambda s: s.id)
        ],
        "factors": [
            [f.id, f.name, f.category, f.unit, f.kind, f.aggregation, f.weight_factor_id, f.direction_hint]
            for f in sorted(factors, key=lambda f: f.id)
        ],
        "values": [
            [v.site_id, v.factor_id, v.t.isoformat(), v.value]
            for v in sorted(values, key=lambda v: (v.site_id, v.factor_id, v.t))
        ],
        "geometries": {sid: geometries[sid] for sid in sorted(geometries)},
        "default_t": default_t.isoformat() if default_t else None,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def build_snapshot(
    sites: Iterable[Site],
    factors: Iterable[FactorDefinition],
    values: Iterable[FactorValue],
    geometries: Optional[Mapping[str, dict]] = None,
    levels: Optional[Sequence[AdminLevel]] = None,
    source: str = "memory",
    default_t: Optional[TimePoint] = None,
    loaded_at: str = "",
) -> DatasetSnapshot:
    """Validate and index; raises BundleError when validation finds errors.

    Geometries for unknown sites are dropped (they only warrant a warning).
    """
    sites = list(sites)
    factors = list(factors)
    values = list(values)
    geometries = dict(geometries or {})
    report = validate_snapshot(sites, factors, values, geometries, levels)
    if not report.ok():
        lines = "; ".join(f"{i.rule}({i.subject})" for i in report.errors[:8])
        raise BundleError(f"bundle failed validation: {lines}", issues=list(report))

    site_map = {s.id: s for s in sites}
    geometries = {sid: g for sid, g in geometries.items() if sid in site_map}
    site_map = {
        sid: (replace(s, geometry_ref=sid) if sid in geometries else replace(s, geometry_ref=None))
        for sid, s in site_map.items()
    }

    if levels is None:
        seen = {s.level.ordinal: s.level for s in site_map.values()}
        levels = [seen[o] for o in sorted(seen)]

    series: dict = {}
    for v in values:
        series.setdefault((v.site_id, v.factor_id), []).append((v.t, float(v.value)))
    series_sorted = {key: tuple(sorted(points)) for key, points in series.items()}

    stamp = hashlib.sha256(
        _canonical_content(levels, site_map.values(), factors, values, geometries, default_t)
    ).hexdigest()

    return DatasetSnapshot(
        levels=levels,
        sites=site_map,
        factors={f.id: f for f in factors},
        series=series_sorted,
        geometries=geometries,
        provenance=Provenance(source=source, loaded_at=loaded_at, stamp=stamp),
        default_t=default_t,
    )

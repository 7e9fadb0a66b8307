"""Query operations over a snapshot: lookup (what), screening and ranking
(where), threshold intervals over a series (when), side-by-side comparison,
and checklist scoring.

All operations are pure reads; a site without data never satisfies a
predicate (conservative screening).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BadPredicateError, BadQueryError
from .hierarchy import (
    AggregatedValue,
    _require_factor,
    _require_site,
    aggregate_value,
    is_descendant_of,
    level_members,
)
from .model import DatasetSnapshot, TimePoint

OPS = ("lt", "le", "eq", "ge", "gt", "between")
_OP_SYMBOLS = {"<": "lt", "<=": "le", "=": "eq", ">=": "ge", ">": "gt"}
_PRED_RE = re.compile(r"^\s*([\w.-]+)\s*(<=|>=|<|>|=)\s*(-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*$")
_BETWEEN_RE = re.compile(
    r"^\s*([\w.-]+)\s+between\s+(-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"\s+(-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*$"
)


@dataclass(frozen=True)
class Predicate:
    """A single conjunct: `factor op bound`, or `factor between lo hi`."""

    factor_id: str
    op: str
    bounds: Tuple[float, ...]

    def __post_init__(self):
        if self.op not in OPS:
            raise BadPredicateError(f"unknown predicate op: {self.op!r}")
        n = 2 if self.op == "between" else 1
        if len(self.bounds) != n:
            raise BadPredicateError(f"op {self.op!r} needs {n} bound(s), got {len(self.bounds)}")
        if self.op == "between" and self.bounds[0] > self.bounds[1]:
            raise BadPredicateError(f"between bounds out of order: {self.bounds}")

    @classmethod
    def parse(cls, text: str) -> "Predicate":
        """Mini-grammar: 'factor op number' with < <= = >= >, or 'factor between a b'."""
        m = _PRED_RE.match(text)
        if m:
            return cls(m.group(1), _OP_SYMBOLS[m.group(2)], (float(m.group(3)),))
        m = _BETWEEN_RE.match(text)
        if m:
            return cls(m.group(1), "between", (float(m.group(2)), float(m.group(3))))
        raise BadPredicateError(f"unparsable predicate: {text!r}")

    def holds(self, value: Optional[float]) -> bool:
        if value is None:
            return False
        if self.op == "lt":
            return value < self.bounds[0]
        if self.op == "le":
            return value <= self.bounds[0]
        if self.op == "eq":
            return value == self.bounds[0]
        if self.op == "ge":
            return value >= self.bounds[0]
        if self.op == "gt":
            return value > self.bounds[0]
        return self.bounds[0] <= value <= self.bounds[1]


@dataclass(frozen=True)
class WhereQuery:
    """Screen + rank the members of one level, optionally under an ancestor."""

    level: object
    t: TimePoint
    scope: Optional[str] = None
    predicates: Tuple[Predicate, ...] = ()
    rank_by: Tuple[Tuple[str, str], ...] = ()  # (factor_id, "asc" | "desc")
    limit: Optional[int] = None


@dataclass(frozen=True)
class SiteMatch:
    site_id: str
    name: str
    rank: int
    values: Dict[str, AggregatedValue]


def lookup_what(
    snapshot: DatasetSnapshot,
    site_id: str,
    factor_ids: Sequence[str],
    t: TimePoint,
    mode: str = "exact",
) -> Dict[str, AggregatedValue]:
    """Per factor, the aggregate at t ('exact') or at the greatest observed
    t' <= t within the site's subtree ('latest_at_or_before').
    """
    _require_site(snapshot, site_id)
    if mode not in ("exact", "latest_at_or_before"):
        raise BadQueryError(f"unknown lookup mode: {mode!r}")
    out: Dict[str, AggregatedValue] = {}
    for fid in factor_ids:
        _require_factor(snapshot, fid)
        if mode == "exact":
            out[fid] = aggregate_value(snapshot, site_id, fid, t)
            continue
        best: Optional[TimePoint] = None
        for (sid, f), points in snapshot.series.items():
            if f != fid or (sid != site_id and not is_descendant_of(snapshot, sid, site_id)):
                continue
            for point_t, _ in points:
                if point_t > t:
                    break
                if best is None or point_t > best:
                    best = point_t
        out[fid] = (
            aggregate_value(snapshot, site_id, fid, best) if best is not None else AggregatedValue.absent()
        )
    return out


def _rank_key(match_values: Dict[str, AggregatedValue], rank_by, site_id: str):
    key = []
    for factor_id, direction in rank_by:
        agg = match_values.get(factor_id)
        if agg is None or agg.value is None:
            key.extend((1, 0.0))  # absent ranks after every present value
        else:
            key.extend((0, -agg.value if direction == "desc" else agg.value))
    key.append(site_id)
    return tuple(key)


def search_where(snapshot: DatasetSnapshot, query: WhereQuery) -> List[SiteMatch]:
    """Members of the level satisfying every predicate, ordered by rank_by
    (lexicographic, ties by site id), truncated to limit.
    """
    for factor_id, direction in query.rank_by:
        _require_factor(snapshot, factor_id)
        if direction not in ("asc", "desc"):
            raise BadQueryError(f"rank direction must be asc or desc, got {direction!r}")
    for pred in query.predicates:
        _require_factor(snapshot, pred.factor_id)
    if query.limit is not None and query.limit < 0:
        raise BadQueryError("limit must be non-negative")

    wanted = list(dict.fromkeys([p.factor_id for p in query.predicates] + [f for f, _ in query.rank_by]))
    matches = []
    for site in level_members(snapshot, query.level, query.scope):
        values = {fid: aggregate_value(snapshot, site.id, fid, query.t) for fid in wanted}
        if all(pred.holds(values[pred.factor_id].value) for pred in query.predicates):
            matches.append((site, values))

    matches.sort(key=lambda pair: _rank_key(pair[1], query.rank_by, pair[0].id))
    if query.limit is not None:
        matches = matches[: query.limit]
    return [
        SiteMatch(site_id=site.id, name=site.name, rank=i + 1, values=values)
        for i, (site, values) in enumerate(matches)
    ]


def search_when(
    snapshot: DatasetSnapshot, site_id: str, factor_id: str, predicate: Predicate
) -> List[Tuple[TimePoint, TimePoint]]:
    """Maximal runs of consecutive stored observations satisfying the
    predicate, as closed [first_t, last_t] intervals. No gap interpolation:
    'consecutive' means adjacent rows of the stored series.
    """
    _require_site(snapshot, site_id)
    _require_factor(snapshot, factor_id)
    intervals: List[Tuple[TimePoint, TimePoint]] = []
    run_start: Optional[TimePoint] = None
    run_end: Optional[TimePoint] = None
    for t, value in snapshot.series_for(site_id, factor_id):
        if predicate.holds(value):
            if run_start is None:
                run_start = t
            run_end = t
        elif run_start is not None:
            intervals.append((run_start, run_end))
            run_start = run_end = None
    if run_start is not None:
        intervals.append((run_start, run_end))
    return intervals


@dataclass(frozen=True)
class Comparison:
    site_ids: Tuple[str, ...]
    factor_ids: Tuple[str, ...]
    matrix: Dict[str, Dict[str, AggregatedValue]]  # site -> factor -> value
    rankings: Dict[str, List[str]]  # factor -> site ids, best first
    warnings: Tuple[str, ...] = ()


def compare_sites(
    snapshot: DatasetSnapshot,
    site_ids: Sequence[str],
    factor_ids: Sequence[str],
    t: TimePoint,
) -> Comparison:
    """Value matrix plus a per-factor ranking following the factor's
    direction hint (neutral ranks descending). Sites missing a value are
    excluded from that factor's ranking.
    """
    if len(site_ids) < 2:
        raise BadQueryError("compare_sites needs at least 2 sites")
    sites = [_require_site(snapshot, sid) for sid in site_ids]
    for fid in factor_ids:
        _require_factor(snapshot, fid)

    warnings = []
    if len({s.level.ordinal for s in sites}) > 1:
        warnings.append("sites span multiple hierarchy levels; values may not be comparable")

    matrix = {
        sid: {fid: aggregate_value(snapshot, sid, fid, t) for fid in factor_ids} for sid in site_ids
    }
    rankings: Dict[str, List[str]] = {}
    for fid in factor_ids:
        ascending = snapshot.factors[fid].direction_hint == "lower_is_better"
        present = [(matrix[sid][fid].value, sid) for sid in site_ids if matrix[sid][fid].value is not None]
        present.sort(key=lambda pair: (pair[0] if ascending else -pair[0], pair[1]))
        rankings[fid] = [sid for _, sid in present]
    return Comparison(
        site_ids=tuple(site_ids),
        factor_ids=tuple(factor_ids),
        matrix=matrix,
        rankings=rankings,
        warnings=tuple(warnings),
    )


RATING_SCORE = {"+": 1.0, "o": 0.0, "-": -1.0}


@dataclass(frozen=True)
class ChecklistCriterion:
    """One weighted requirement. For higher_is_better, values at or above
    plus_threshold rate '+', at or above minus_threshold rate 'o', else '-';
    lower_is_better mirrors the comparisons.
    """

    factor_id: str
    weight: float
    plus_threshold: float
    minus_threshold: float
    direction: str = "higher_is_better"

    def __post_init__(self):
        if self.weight <= 0:
            raise BadQueryError(f"criterion weight must be positive, got {self.weight}")
        if self.direction == "higher_is_better":
            if self.plus_threshold < self.minus_threshold:
                raise BadQueryError(
                    f"higher_is_better needs plus_threshold >= minus_threshold "
                    f"({self.plus_threshold} < {self.minus_threshold})"
                )
        elif self.direction == "lower_is_better":
            if self.plus_threshold > self.minus_threshold:
                raise BadQueryError(
                    f"lower_is_better needs plus_threshold <= minus_threshold "
                    f"({self.plus_threshold} > {self.minus_threshold})"
                )
        else:
            raise BadQueryError(f"unknown criterion direction: {self.direction!r}")

    def rate(self, value: Optional[float]) -> str:
        if value is None:
            return "-"
        if self.direction == "higher_is_better":
            if value >= self.plus_threshold:
                return "+"
            if value >= self.minus_threshold:
                return "o"
            return "-"
        if value <= self.plus_threshold:
            return "+"
        if value <= self.minus_threshold:
            return "o"
        return "-"


@dataclass(frozen=True)
class ChecklistTable:
    site_ids: Tuple[str, ...]
    criteria: Tuple[ChecklistCriterion, ...]
    ratings: Dict[str, Dict[str, str]]  # site -> factor -> "+" | "o" | "-"
    totals: Dict[str, float]
    ranking: List[str]  # site ids, best total first
    flagged: List[Tuple[str, str]] = field(default_factory=list)  # (site, factor) with no data


def checklist_score(
    snapshot: DatasetSnapshot,
    site_ids: Sequence[str],
    criteria: Sequence[ChecklistCriterion],
    t: TimePoint,
) -> ChecklistTable:
    """Rate every (site, criterion) cell, total with the criterion weights
    (+1/0/-1 per rating) and rank sites by total. Cells without data rate
    '-' and are flagged.
    """
    if not criteria:
        raise BadQueryError("checklist needs at least one criterion")
    seen = set()
    for c in criteria:
        factor = _require_factor(snapshot, c.factor_id)
        if factor.kind == "soft":
            raise BadQueryError(f"soft factor {c.factor_id!r} cannot be scored")
        if c.factor_id in seen:
            raise BadQueryError(f"duplicate criterion factor: {c.factor_id!r}")
        seen.add(c.factor_id)
    for sid in site_ids:
        _require_site(snapshot, sid)

    ratings: Dict[str, Dict[str, str]] = {}
    totals: Dict[str, float] = {}
    flagged: List[Tuple[str, str]] = []
    for sid in site_ids:
        row: Dict[str, str] = {}
        total = 0.0
        for c in criteria:
            value = aggregate_value(snapshot, sid, c.factor_id, t).value
            rating = c.rate(value)
            if value is None:
                flagged.append((sid, c.factor_id))
            row[c.factor_id] = rating
            total += c.weight * RATING_SCORE[rating]
        ratings[sid] = row
        totals[sid] = total

    ranking = sorted(site_ids, key=lambda sid: (-totals[sid], sid))
    return ChecklistTable(
        site_ids=tuple(site_ids),
        criteria=tuple(criteria),
        ratings=ratings,
        totals=totals,
        ranking=ranking,
        flagged=flagged,
    )

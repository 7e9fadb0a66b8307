"""Hierarchy navigation (drill-down / roll-up) and roll-up aggregation.

Aggregation walks the administrative tree: a stored observation always wins
over a computed one (official statistics may disagree with the sum of their
subdivisions; trust the source). Computed aggregates carry a coverage
fraction telling how much of the leaf population contributed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .errors import UnknownFactorError, UnknownLevelError, UnknownSiteError
from .model import DatasetSnapshot, Site, TimePoint


@dataclass(frozen=True)
class AggregatedValue:
    """value is None exactly when coverage is 0; partial means coverage < 1."""

    value: Optional[float]
    coverage: float
    partial: bool

    @classmethod
    def absent(cls) -> "AggregatedValue":
        return cls(value=None, coverage=0.0, partial=True)


def _require_site(snapshot: DatasetSnapshot, site_id: str) -> Site:
    try:
        return snapshot.sites[site_id]
    except KeyError:
        raise UnknownSiteError(site_id) from None


def _require_factor(snapshot: DatasetSnapshot, factor_id: str):
    try:
        return snapshot.factors[factor_id]
    except KeyError:
        raise UnknownFactorError(factor_id) from None


def children(snapshot: DatasetSnapshot, site_id: str) -> List[Site]:
    """All sites whose parent is `site_id`, sorted by name then id."""
    _require_site(snapshot, site_id)
    return [snapshot.sites[cid] for cid in snapshot.children_ids[site_id]]


def parent(snapshot: DatasetSnapshot, site_id: str) -> Optional[Site]:
    site = _require_site(snapshot, site_id)
    if site.parent_id is None:
        return None
    return snapshot.sites[site.parent_id]


def path_to_root(snapshot: DatasetSnapshot, site_id: str) -> List[Site]:
    """Breadcrumb from the site up to its root, site first."""
    site = _require_site(snapshot, site_id)
    path = [site]
    while site.parent_id is not None:
        site = snapshot.sites[site.parent_id]
        path.append(site)
    return path


def resolve_level(snapshot: DatasetSnapshot, level) -> int:
    """Accept an ordinal, a level name or an AdminLevel; return the ordinal."""
    if hasattr(level, "ordinal"):
        level = level.ordinal
    if isinstance(level, int):
        if level in snapshot.level_by_ordinal:
            return level
        raise UnknownLevelError(level)
    if isinstance(level, str):
        if level in snapshot.level_by_name:
            return snapshot.level_by_name[level].ordinal
        if level.isdigit() and int(level) in snapshot.level_by_ordinal:
            return int(level)
    raise UnknownLevelError(level)


def is_descendant_of(snapshot: DatasetSnapshot, site_id: str, ancestor_id: str) -> bool:
    cur = snapshot.sites[site_id].parent_id
    while cur is not None:
        if cur == ancestor_id:
            return True
        cur = snapshot.sites[cur].parent_id
    return False


def level_members(snapshot: DatasetSnapshot, level, scope: Optional[str] = None) -> List[Site]:
    """All sites at `level`, optionally restricted to descendants of `scope`."""
    ordinal = resolve_level(snapshot, level)
    if scope is not None:
        _require_site(snapshot, scope)
    members = [snapshot.sites[sid] for sid in snapshot.sites_by_level[ordinal]]
    if scope is None:
        return members
    return [s for s in members if is_descendant_of(snapshot, s.id, scope)]


def leaf_count(snapshot: DatasetSnapshot, site_id: str) -> int:
    """Number of leaf descendants; a leaf counts itself as 1."""
    cached = snapshot._leaf_count_cache.get(site_id)
    if cached is not None:
        return cached
    child_ids = snapshot.children_ids[site_id]
    count = 1 if not child_ids else sum(leaf_count(snapshot, cid) for cid in child_ids)
    snapshot._leaf_count_cache[site_id] = count
    return count


def aggregate_value(
    snapshot: DatasetSnapshot, site_id: str, factor_id: str, t: TimePoint
) -> AggregatedValue:
    """Stored value at (site, factor, t) if any, else the roll-up over children
    per the factor's aggregation rule. Coverage is the fraction of leaf
    descendants contributing data.
    """
    _require_site(snapshot, site_id)
    _require_factor(snapshot, factor_id)
    return _aggregate(snapshot, site_id, factor_id, t)


def _aggregate(snapshot, site_id, factor_id, t) -> AggregatedValue:
    key = (site_id, factor_id, t)
    cached = snapshot._agg_cache.get(key)
    if cached is not None:
        return cached
    result = _compute_aggregate(snapshot, site_id, factor_id, t)
    snapshot._agg_cache[key] = result
    return result


def _compute_aggregate(snapshot, site_id, factor_id, t) -> AggregatedValue:
    stored = snapshot.stored_value(site_id, factor_id, t)
    if stored is not None:
        return AggregatedValue(value=stored, coverage=1.0, partial=False)

    child_ids = snapshot.children_ids[site_id]
    if not child_ids:
        return AggregatedValue.absent()

    factor = snapshot.factors[factor_id]
    if factor.aggregation == "none":
        return AggregatedValue.absent()

    parts = [(cid, _aggregate(snapshot, cid, factor_id, t)) for cid in child_ids]
    total_leaves = sum(leaf_count(snapshot, cid) for cid in child_ids)

    if factor.aggregation in ("sum", "mean"):
        present = [agg.value for _, agg in parts if agg.value is not None]
        coverage = (
            sum(agg.coverage * leaf_count(snapshot, cid) for cid, agg in parts) / total_leaves
        )
        if not present:
            return AggregatedValue.absent()
        value = sum(present) if factor.aggregation == "sum" else sum(present) / len(present)
        return AggregatedValue(value=value, coverage=coverage, partial=coverage < 1.0)

    # weighted_mean: children contribute only when value and weight both exist.
    weight_id = factor.weight_factor_id
    num = 0.0
    den = 0.0
    covered_leaves = 0.0
    for cid, agg in parts:
        if agg.value is None:
            continue
        w = _aggregate(snapshot, cid, weight_id, t)
        if w.value is None:
            continue
        num += agg.value * w.value
        den += w.value
        covered_leaves += agg.coverage * leaf_count(snapshot, cid)
    if den == 0.0:
        # Zero total weight: no defensible value; coverage drops to 0 so the
        # absent-value/zero-coverage pairing stays intact.
        return AggregatedValue.absent()
    return AggregatedValue(
        value=num / den,
        coverage=covered_leaves / total_leaves,
        partial=covered_leaves / total_leaves < 1.0,
    )

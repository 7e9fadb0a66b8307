"""Bundle ingestion: manifest + sites table + factor catalog + series
table(s) + geometries -> validated DatasetSnapshot.

Formats: JSON manifest, RFC-4180 CSV tables (header row mandatory, '.' as
the decimal point, no thousands separators), GeoJSON FeatureCollection with
a `site_id` feature property. Series are long format (one row per
observation); missing observations are absent rows, never sentinels.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import BundleError
from .model import (
    AdminLevel,
    DatasetSnapshot,
    FactorDefinition,
    FactorValue,
    Issue,
    Site,
    TimePoint,
    build_snapshot,
)

SUPPORTED_VERSIONS = (1,)

SITE_COLUMNS = ("id", "name", "level", "parent_id")
FACTOR_COLUMNS = ("id", "name", "category", "unit", "kind", "aggregation", "weight_factor", "direction")
SERIES_COLUMNS = ("site_id", "factor_id", "t", "value")


@dataclass(frozen=True)
class BundleManifest:
    format_version: int
    source: str
    levels: Tuple[AdminLevel, ...]
    sites_path: str
    factors_path: str
    series_paths: Tuple[str, ...]
    geometries_path: Optional[str]
    default_t: Optional[TimePoint]
    base_dir: Path

    def resolve(self, rel: str) -> Path:
        return self.base_dir / rel


def read_manifest(manifest_location) -> BundleManifest:
    path = Path(manifest_location)
    if path.is_dir():
        path = path / "manifest.json"
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise BundleError(f"cannot read manifest {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise BundleError(f"{path}: manifest is not valid JSON: {exc}") from exc

    version = doc.get("format_version")
    if version not in SUPPORTED_VERSIONS:
        raise BundleError(f"{path}: unsupported format_version {version!r}")
    try:
        levels = tuple(AdminLevel(int(lv["ordinal"]), str(lv["name"])) for lv in doc["levels"])
        sites_path = doc["sites"]
        factors_path = doc["factors"]
        series = doc["series"]
    except (KeyError, TypeError) as exc:
        raise BundleError(f"{path}: manifest missing required field: {exc}") from exc
    series_paths = tuple([series] if isinstance(series, str) else series)
    default_t = None
    if doc.get("default_t"):
        try:
            default_t = TimePoint.parse(doc["default_t"])
        except ValueError as exc:
            raise BundleError(f"{path}: bad default_t: {exc}") from exc

    manifest = BundleManifest(
        format_version=version,
        source=doc.get("source", path.parent.name),
        levels=levels,
        sites_path=sites_path,
        factors_path=factors_path,
        series_paths=series_paths,
        geometries_path=doc.get("geometries"),
        default_t=default_t,
        base_dir=path.parent,
    )
    missing = [
        rel
        for rel in [manifest.sites_path, manifest.factors_path, *manifest.series_paths]
        + ([manifest.geometries_path] if manifest.geometries_path else [])
        if not manifest.resolve(rel).exists()
    ]
    if missing:
        raise BundleError(f"{path}: referenced file(s) missing: {', '.join(missing)}")
    return manifest


def _read_rows(path: Path, required: Sequence[str]) -> List[Dict[str, str]]:
    """CSV rows as dicts; short/long rows are reported with their line number."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise BundleError(f"cannot read {path}: {exc}") from exc
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise BundleError(f"{path}: empty file, header row is mandatory") from None
    missing = [col for col in required if col not in header]
    if missing:
        raise BundleError(f"{path}: missing column(s): {', '.join(missing)}")
    rows = []
    issues = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            issues.append(
                Issue("error", "malformed_row", f"{path.name}:{lineno}",
                      f"{path.name} line {lineno}: expected {len(header)} columns, got {len(row)}")
            )
            continue
        rows.append(dict(zip(header, row)))
    if issues:
        raise BundleError(f"{path}: {len(issues)} malformed row(s)", issues=issues)
    return rows


def parse_sites_table(rows: Iterable[Mapping[str, str]], levels: Sequence[AdminLevel]) -> List[Site]:
    """One Site per record; empty parent_id means root. Level is matched by
    name against the declared level list.
    """
    by_name = {lv.name: lv for lv in levels}
    sites = []
    issues = []
    for i, row in enumerate(rows, start=1):
        level = by_name.get(row["level"])
        if level is None:
            issues.append(
                Issue("error", "unknown_level", row.get("id", f"row {i}"),
                      f"site row {i}: unknown level {row['level']!r}")
            )
            continue
        parent = row["parent_id"].strip() or None
        sites.append(Site(id=row["id"], name=row["name"], level=level, parent_id=parent))
    if issues:
        raise BundleError(f"sites table: {len(issues)} bad row(s)", issues=issues)
    return sites


def parse_factors_table(rows: Iterable[Mapping[str, str]]) -> List[FactorDefinition]:
    factors = []
    for row in rows:
        factors.append(
            FactorDefinition(
                id=row["id"],
                name=row["name"],
                category=row["category"],
                unit=row["unit"],
                kind=row["kind"],
                aggregation=row["aggregation"],
                weight_factor_id=row["weight_factor"].strip() or None,
                direction_hint=row["direction"],
            )
        )
    return factors


def parse_series_table(rows: Iterable[Mapping[str, str]]) -> List[FactorValue]:
    """Long-format observations; times normalize to month granularity.
    Duplicate (site, factor, t) keys, unparsable times and non-finite values
    are errors.
    """
    values = []
    issues = []
    seen = set()
    for i, row in enumerate(rows, start=1):
        subject = f"{row['site_id']}/{row['factor_id']}"
        try:
            t = TimePoint.parse(row["t"])
        except ValueError as exc:
            issues.append(Issue("error", "bad_time", subject, f"series row {i}: {exc}"))
            continue
        try:
            value = float(row["value"])
        except ValueError:
            issues.append(Issue("error", "bad_value", subject, f"series row {i}: unparsable value {row['value']!r}"))
            continue
        if not math.isfinite(value):
            issues.append(Issue("error", "nonfinite_value", subject, f"series row {i}: non-finite value {value!r}"))
            continue
        key = (row["site_id"], row["factor_id"], t)
        if key in seen:
            issues.append(
                Issue("error", "duplicate_observation", subject,
                      f"series row {i}: duplicate observation {subject}@{t}")
            )
            continue
        seen.add(key)
        values.append(FactorValue(site_id=row["site_id"], factor_id=row["factor_id"], t=t, value=value))
    if issues:
        raise BundleError(f"series table: {len(issues)} bad row(s)", issues=issues)
    return values


def parse_geometries(
    document: Mapping, known_site_ids: Optional[Iterable[str]] = None
) -> Tuple[Dict[str, dict], List[Issue]]:
    """FeatureCollection -> {site id: geometry}. Features for unknown sites
    produce warnings and stay out of the map (geometry providers drift from
    statistical providers); non-polygonal features are errors.
    """
    if document.get("type") != "FeatureCollection":
        raise BundleError(f"geometry document is not a FeatureCollection: {document.get('type')!r}")
    known = set(known_site_ids) if known_site_ids is not None else None
    geometries: Dict[str, dict] = {}
    warnings: List[Issue] = []
    issues: List[Issue] = []
    for i, feature in enumerate(document.get("features", [])):
        props = feature.get("properties") or {}
        site_id = props.get("site_id")
        if site_id is None:
            issues.append(Issue("error", "missing_site_id", f"feature {i}", f"feature {i} has no site_id property"))
            continue
        geom = feature.get("geometry") or {}
        if geom.get("type") not in ("Polygon", "MultiPolygon"):
            issues.append(
                Issue("error", "unsupported_geometry", str(site_id),
                      f"feature {i} ({site_id}): unsupported geometry type {geom.get('type')!r}")
            )
            continue
        if known is not None and site_id not in known:
            warnings.append(
                Issue("warning", "geometry_unknown_site", str(site_id),
                      f"feature {i}: geometry for unknown site {site_id!r} ignored")
            )
            continue
        if site_id in geometries:
            issues.append(
                Issue("error", "duplicate_geometry", str(site_id), f"feature {i}: duplicate geometry for {site_id!r}")
            )
            continue
        geometries[site_id] = geom
    if issues:
        raise BundleError(f"geometries: {len(issues)} bad feature(s)", issues=issues)
    return geometries, warnings


def load_bundle(manifest_location) -> DatasetSnapshot:
    """Parse, validate and index a bundle. Same bytes always produce an
    identical snapshot (identical iteration orders and provenance stamp).
    """
    manifest = read_manifest(manifest_location)
    sites = parse_sites_table(
        _read_rows(manifest.resolve(manifest.sites_path), SITE_COLUMNS), manifest.levels
    )
    factors = parse_factors_table(_read_rows(manifest.resolve(manifest.factors_path), FACTOR_COLUMNS))
    values: List[FactorValue] = []
    seen_keys = set()
    for rel in manifest.series_paths:
        for v in parse_series_table(_read_rows(manifest.resolve(rel), SERIES_COLUMNS)):
            key = (v.site_id, v.factor_id, v.t)
            if key in seen_keys:
                raise BundleError(f"{rel}: duplicate observation across series files: {key}")
            seen_keys.add(key)
            values.append(v)

    geometries: Dict[str, dict] = {}
    if manifest.geometries_path:
        geo_path = manifest.resolve(manifest.geometries_path)
        try:
            doc = json.loads(geo_path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise BundleError(f"cannot read {geo_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise BundleError(f"{geo_path}: invalid JSON: {exc}") from exc
        geometries, _ = parse_geometries(doc, known_site_ids=[s.id for s in sites])

    return build_snapshot(
        sites=sites,
        factors=factors,
        values=values,
        geometries=geometries,
        levels=manifest.levels,
        source=manifest.source,
        default_t=manifest.default_t,
        loaded_at=datetime.now(timezone.utc).isoformat(),
    )


def write_bundle(
    out_dir,
    levels: Sequence[AdminLevel],
    sites: Sequence[Site],
    factors: Sequence[FactorDefinition],
    values: Sequence[FactorValue],
    geometries: Mapping[str, dict],
    source: str,
    default_t: Optional[TimePoint] = None,
) -> Path:
    """Serialize to the on-disk bundle layout; rows are sorted so identical
    content yields identical bytes. Returns the manifest path.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def write_csv(name: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
        with (out / name).open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)

    write_csv(
        "sites.csv",
        SITE_COLUMNS,
        [(s.id, s.name, s.level.name, s.parent_id or "") for s in sorted(sites, key=lambda s: s.id)],
    )
    write_csv(
        "factors.csv",
        FACTOR_COLUMNS,
        [
            (f.id, f.name, f.category, f.unit, f.kind, f.aggregation, f.weight_factor_id or "", f.direction_hint)
            for f in sorted(factors, key=lambda f: f.id)
        ],
    )
    write_csv(
        "values.csv",
        SERIES_COLUMNS,
        [
            (v.site_id, v.factor_id, v.t.isoformat(), repr(float(v.value)))
            for v in sorted(values, key=lambda v: (v.site_id, v.factor_id, v.t))
        ],
    )

    manifest = {
        "format_version": 1,
        "source": source,
        "levels": [{"ordinal": lv.ordinal, "name": lv.name} for lv in sorted(levels, key=lambda l: l.ordinal)],
        "sites": "sites.csv",
        "factors": "factors.csv",
        "series": ["values.csv"],
        "default_t": default_t.isoformat() if default_t else None,
    }
    if geometries:
        features = [
            {
                "type": "Feature",
                "properties": {"site_id": sid},
                "geometry": geometries[sid],
            }
            for sid in sorted(geometries)
        ]
        doc = {"type": "FeatureCollection", "features": features}
        (out / "geometries.geojson").write_text(
            json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8"
        )
        manifest["geometries"] = "geometries.geojson"

    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest_path

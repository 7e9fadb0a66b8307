"""HTTP service: exposes the engine to the web UI and external clients and
owns the snapshot lifecycle (load, atomic reload, export).

Concurrency contract: handlers grab one immutable snapshot reference at
request start and never see another; reload validates the new bundle fully,
then publishes it with a single reference swap (reloads serialize on a
lock, readers never block). Every response carries the snapshot's content
stamp so clients can detect reloads.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import List, Optional

from fastapi import Body, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import hierarchy, query, views, wire
from .errors import BadPredicateError, BadQueryError, SiteSelectError
from .ingest import load_bundle, write_bundle
from .model import DatasetSnapshot, FactorValue, TimePoint
from .svg import render_choropleth_svg

_STATUS_BY_CODE = {
    "unknown_site": 404,
    "unknown_factor": 404,
    "unknown_level": 404,
    "bad_predicate": 400,
    "bad_query": 400,
    "childless_parent": 400,
    "invalid_bundle": 400,
    "bad_request": 400,
    "internal_error": 500,
}


class SnapshotStore:
    """Holds the live snapshot; swap is atomic, reloads are serialized."""

    def __init__(self, snapshot: DatasetSnapshot):
        self._snapshot = snapshot
        self._lock = threading.Lock()

    def current(self) -> DatasetSnapshot:
        return self._snapshot

    def reload(self, bundle_path) -> DatasetSnapshot:
        """Load + validate fully before swapping; on failure the old
        snapshot stays live and the error propagates.
        """
        with self._lock:
            snapshot = load_bundle(bundle_path)
            self._snapshot = snapshot
            return snapshot


def export_bundle(snapshot: DatasetSnapshot, out_dir) -> Path:
    """Serialize a live snapshot back into a loadable bundle directory."""
    values = [
        FactorValue(site_id=sid, factor_id=fid, t=t, value=v)
        for (sid, fid), points in snapshot.series.items()
        for t, v in points
    ]
    return write_bundle(
        out_dir,
        levels=snapshot.levels,
        sites=list(snapshot.sites.values()),
        factors=list(snapshot.factors.values()),
        values=values,
        geometries=snapshot.geometries,
        source=snapshot.provenance.source,
        default_t=snapshot.default_t,
    )


class PredicateBody(BaseModel):
    factor: str
    op: str
    bound: Optional[float] = None
    bounds: Optional[List[float]] = None

    def to_predicate(self) -> query.Predicate:
        if self.op == "between":
            if not self.bounds or len(self.bounds) != 2:
                raise BadPredicateError("between predicate needs bounds: [low, high]")
            return query.Predicate(self.factor, "between", tuple(self.bounds))
        if self.bound is None:
            raise BadPredicateError(f"predicate op {self.op!r} needs a bound")
        return query.Predicate(self.factor, self.op, (self.bound,))


class WhereBody(BaseModel):
    level: str
    t: Optional[str] = None
    scope: Optional[str] = None
    predicates: List[PredicateBody] = []
    rank_by: List[List[str]] = []
    limit: Optional[int] = None


class WhenBody(BaseModel):
    site: str
    factor: str
    predicate: PredicateBody


class CompareBody(BaseModel):
    sites: List[str]
    factors: List[str]
    t: Optional[str] = None


class CriterionBody(BaseModel):
    factor: str
    weight: float
    plus_threshold: float
    minus_threshold: float
    direction: str = "higher_is_better"


class ChecklistBody(BaseModel):
    sites: List[str]
    criteria: List[CriterionBody]
    t: Optional[str] = None


class InsightsBody(BaseModel):
    sites: List[str]
    factors: List[str]
    t: Optional[str] = None


class ReloadBody(BaseModel):
    path: str


def _resolve_t(snapshot: DatasetSnapshot, t: Optional[str]) -> TimePoint:
    if t:
        return wire.parse_time(t)
    if snapshot.default_t is not None:
        return snapshot.default_t
    raise BadQueryError("no time point given and the dataset declares no default")


def _rank_by(pairs: List[List[str]]):
    out = []
    for pair in pairs:
        if len(pair) != 2:
            raise BadQueryError(f"rank_by entries must be [factor, asc|desc], got {pair!r}")
        out.append((pair[0], pair[1]))
    return tuple(out)


def create_app(store: SnapshotStore) -> FastAPI:
    app = FastAPI(title="siteselect", docs_url=None, redoc_url=None)

    @app.exception_handler(SiteSelectError)
    async def engine_error(_req: Request, exc: SiteSelectError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse({"code": exc.code, "message": str(exc)}, status_code=status)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(_req: Request, exc: RequestValidationError):
        return JSONResponse({"code": "bad_request", "message": str(exc.errors()[:3])}, status_code=400)

    def stamped(snapshot: DatasetSnapshot, **payload) -> dict:
        return {"stamp": snapshot.provenance.stamp, **payload}

    @app.get("/api/health")
    def health():
        snap = store.current()
        return stamped(
            snap,
            source=snap.provenance.source,
            default_t=snap.default_t.isoformat() if snap.default_t else None,
            counts={
                "sites": len(snap.sites),
                "factors": len(snap.factors),
                "values": snap.value_count,
            },
        )

    @app.get("/api/levels")
    def levels():
        snap = store.current()
        return stamped(snap, levels=[{"ordinal": lv.ordinal, "name": lv.name} for lv in snap.levels])

    @app.get("/api/sites")
    def sites(level: Optional[str] = None, parent: Optional[str] = None):
        snap = store.current()
        level = level or None  # empty query params mean "unset"
        parent = parent or None
        if level is not None:
            members = hierarchy.level_members(snap, level, scope=parent)
        elif parent is not None:
            hierarchy._require_site(snap, parent)
            members = [
                s
                for s in snap.sites.values()
                if s.id != parent and hierarchy.is_descendant_of(snap, s.id, parent)
            ]
            members.sort(key=lambda s: (s.level.ordinal, s.name, s.id))
        else:
            members = sorted(snap.sites.values(), key=lambda s: (s.level.ordinal, s.name, s.id))
        return stamped(snap, sites=[wire.site_doc(s) for s in members])

    @app.get("/api/sites/{site_id}")
    def site(site_id: str):
        snap = store.current()
        return stamped(snap, site=wire.site_doc(hierarchy._require_site(snap, site_id)))

    @app.get("/api/sites/{site_id}/children")
    def children(site_id: str):
        snap = store.current()
        return stamped(snap, sites=[wire.site_doc(s) for s in hierarchy.children(snap, site_id)])

    @app.get("/api/sites/{site_id}/parent")
    def parent(site_id: str):
        snap = store.current()
        p = hierarchy.parent(snap, site_id)
        return stamped(snap, site=wire.site_doc(p) if p else None)

    @app.get("/api/sites/{site_id}/path")
    def path(site_id: str):
        snap = store.current()
        return stamped(snap, sites=[wire.site_doc(s) for s in hierarchy.path_to_root(snap, site_id)])

    @app.get("/api/geometries")
    def geometries(parent: str):
        snap = store.current()
        features = [
            f
            for s in hierarchy.children(snap, parent)
            if (f := wire.geometry_feature(snap, s)) is not None
        ]
        return {"type": "FeatureCollection", "stamp": snap.provenance.stamp, "features": features}

    @app.get("/api/factors")
    def factors():
        snap = store.current()
        return stamped(snap, factors=[wire.factor_doc(f) for f in snap.factors.values()])

    @app.get("/api/series")
    def series(
        site: str,
        factor: str,
        from_t: Optional[str] = Query(default=None, alias="from"),
        to_t: Optional[str] = Query(default=None, alias="to"),
    ):
        snap = store.current()
        t_range = (
            wire.parse_time(from_t) if from_t else None,
            wire.parse_time(to_t) if to_t else None,
        )
        view = views.build_series_view(snap, [site], factor, t_range=t_range)
        return stamped(snap, **wire.series_doc(view, site))

    @app.get("/api/what")
    def what(site: str, factors: str, t: Optional[str] = None, mode: str = "exact"):
        snap = store.current()
        factor_ids = [f for f in factors.split(",") if f]
        point = _resolve_t(snap, t)
        result = query.lookup_what(snap, site, factor_ids, point, mode=mode)
        return stamped(
            snap,
            site=site,
            t=point.isoformat(),
            mode=mode,
            values={fid: wire.agg_doc(a) for fid, a in result.items()},
        )

    @app.post("/api/query/where")
    def where(body: WhereBody):
        snap = store.current()
        q = query.WhereQuery(
            level=body.level,
            t=_resolve_t(snap, body.t),
            scope=body.scope,
            predicates=tuple(p.to_predicate() for p in body.predicates),
            rank_by=_rank_by(body.rank_by),
            limit=body.limit,
        )
        matches = query.search_where(snap, q)
        return stamped(snap, matches=[wire.match_doc(m) for m in matches])

    @app.post("/api/query/when")
    def when(body: WhenBody):
        snap = store.current()
        intervals = query.search_when(snap, body.site, body.factor, body.predicate.to_predicate())
        return stamped(
            snap,
            site=body.site,
            factor=body.factor,
            intervals=[[a.isoformat(), b.isoformat()] for a, b in intervals],
        )

    @app.post("/api/compare")
    def compare(body: CompareBody):
        snap = store.current()
        point = _resolve_t(snap, body.t)
        cmp = query.compare_sites(snap, body.sites, body.factors, point)
        return stamped(snap, t=point.isoformat(), **wire.comparison_doc(cmp))

    @app.post("/api/checklist")
    def checklist(body: ChecklistBody):
        snap = store.current()
        point = _resolve_t(snap, body.t)
        criteria = [
            query.ChecklistCriterion(
                factor_id=c.factor,
                weight=c.weight,
                plus_threshold=c.plus_threshold,
                minus_threshold=c.minus_threshold,
                direction=c.direction,
            )
            for c in body.criteria
        ]
        table = query.checklist_score(snap, body.sites, criteria, point)
        return stamped(snap, t=point.isoformat(), **wire.checklist_doc(table))

    @app.post("/api/insights")
    def insights(body: InsightsBody):
        snap = store.current()
        point = _resolve_t(snap, body.t)
        charts = views.build_insights(snap, body.sites, body.factors, point)
        return stamped(snap, t=point.isoformat(), **wire.insights_doc(charts))

    @app.get("/api/statistics")
    def statistics(site: str, factor: str, t: Optional[str] = None):
        snap = store.current()
        point = _resolve_t(snap, t)
        stats = views.child_statistics(snap, site, factor, point)
        return stamped(snap, site=site, factor=factor, t=point.isoformat(), **wire.stats_doc(stats))

    @app.post("/api/table")
    def table(body: InsightsBody):
        snap = store.current()
        point = _resolve_t(snap, body.t)
        tbl = views.data_table(snap, body.sites, body.factors, point)
        return stamped(snap, t=point.isoformat(), **wire.table_doc(tbl))

    @app.get("/api/choropleth")
    def choropleth(
        parent: str,
        factor: str,
        t: Optional[str] = None,
        scheme: str = "quantile",
        k: int = 5,
        format: str = "json",
    ):
        snap = store.current()
        point = _resolve_t(snap, t)
        layer = views.build_choropleth(snap, parent, factor, point, scheme=scheme, k=k)
        if format == "svg":
            return Response(render_choropleth_svg(snap, layer), media_type="image/svg+xml")
        if format != "json":
            raise BadQueryError(f"unknown choropleth format: {format!r}")
        return stamped(snap, **wire.choropleth_doc(layer))

    @app.post("/api/admin/reload")
    def reload(body: ReloadBody = Body(...)):
        snap = store.reload(body.path)
        return stamped(snap, source=snap.provenance.source)

    return app


def serve(bundle_path, host: str = "127.0.0.1", port: int = 8800, ui_dir=None) -> None:
    """Load a bundle and serve it until interrupted."""
    import uvicorn

    store = SnapshotStore(load_bundle(bundle_path))
    app = create_app(store)
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    uvicorn.run(app, host=host, port=port, log_level="warning")

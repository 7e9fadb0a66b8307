"""Operator command line: validate/serve bundles, run queries headlessly,
export choropleth SVGs, generate synthetic data.

Exit codes: 0 success, 1 usage error, 2 data/engine error. Data goes to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import wire
from .errors import BundleError, SiteSelectError
from .ingest import load_bundle
from .model import TimePoint
from .query import ChecklistCriterion, Predicate, WhereQuery, checklist_score, lookup_what, search_when, search_where
from .svg import render_choropleth_svg
from .synth import generate_synthetic
from .views import build_choropleth, format_number


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors by default; this contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="siteselect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="load a bundle and report validation findings")
    p.add_argument("bundle")

    p = sub.add_parser("serve", help="serve a bundle over HTTP")
    p.add_argument("bundle")
    p.add_argument("--bind", default="127.0.0.1:8800", help="host:port (default 127.0.0.1:8800)")
    p.add_argument("--ui", default=None, help="directory of built web UI assets to serve at /")

    p = sub.add_parser("where", help="screen and rank the sites of one level")
    p.add_argument("bundle")
    p.add_argument("--level", required=True)
    p.add_argument("--scope", default=None)
    p.add_argument("--t", default=None)
    p.add_argument(
        "--predicate",
        action="append",
        default=[],
        help="'factor op number' with ops < <= = >= >, or 'factor between a b'; repeatable",
    )
    p.add_argument("--rank-by", action="append", default=[], help="factor:asc|desc; repeatable")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")

    p = sub.add_parser("when", help="find when a site's series satisfied a predicate")
    p.add_argument("bundle")
    p.add_argument("--site", required=True)
    p.add_argument("--factor", required=True)
    p.add_argument("--predicate", required=True, help="e.g. '<7' or 'between 5 7'")

    p = sub.add_parser("what", help="look up factor values of one site")
    p.add_argument("bundle")
    p.add_argument("--site", required=True)
    p.add_argument("--factors", required=True, help="comma-separated factor ids")
    p.add_argument("--t", default=None)
    p.add_argument("--mode", choices=("exact", "latest_at_or_before"), default="exact")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")

    p = sub.add_parser("checklist", help="score sites against weighted criteria")
    p.add_argument("bundle")
    p.add_argument("--criteria", required=True, help="JSON file of criteria")
    p.add_argument("--sites", required=True, help="comma-separated site ids")
    p.add_argument("--t", default=None)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")

    p = sub.add_parser("choropleth", help="export a classified map as SVG")
    p.add_argument("bundle")
    p.add_argument("--parent", required=True)
    p.add_argument("--factor", required=True)
    p.add_argument("--t", default=None)
    p.add_argument("--scheme", choices=("quantile", "equal_interval"), default="quantile")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--size", default="800x600", help="WIDTHxHEIGHT pixels")
    p.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="generate a deterministic synthetic bundle")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--levels", default="1,4,16", help="comma-separated site count per level")
    p.add_argument("--factors", type=int, default=3)
    p.add_argument("--timepoints", type=int, default=6)
    p.add_argument("--missing", type=float, default=0.0)
    return parser


def _resolve_t(snapshot, text):
    if text:
        return wire.parse_time(text)
    if snapshot.default_t is not None:
        return snapshot.default_t
    raise SiteSelectError("no --t given and the bundle declares no default_t")


def _fmt_cell(agg) -> str:
    if agg.value is None:
        return ""
    text = format_number(agg.value)
    return text + ("*" if agg.partial else "")


def _cmd_validate(args) -> int:
    try:
        snapshot = load_bundle(args.bundle)
    except BundleError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        for issue in exc.issues:
            print(f"  {issue.severity}: {issue.rule} [{issue.subject}] {issue.message}", file=sys.stderr)
        return 2
    print(
        f"ok: {len(snapshot.sites)} sites, {len(snapshot.factors)} factors, "
        f"{snapshot.value_count} values (stamp {snapshot.provenance.stamp[:12]})"
    )
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise SiteSelectError(f"--bind must be host:port, got {args.bind!r}")
    serve(args.bundle, host=host, port=int(port), ui_dir=args.ui)
    return 0


def _cmd_where(args) -> int:
    snapshot = load_bundle(args.bundle)
    rank_by = []
    for spec in args.rank_by:
        factor, _, direction = spec.partition(":")
        rank_by.append((factor, direction or "desc"))
    q = WhereQuery(
        level=args.level,
        t=_resolve_t(snapshot, args.t),
        scope=args.scope,
        predicates=tuple(Predicate.parse(text) for text in args.predicate),
        rank_by=tuple(rank_by),
        limit=args.limit,
    )
    matches = search_where(snapshot, q)
    columns = list(dict.fromkeys([f for f, _ in q.rank_by] + [p.factor_id for p in q.predicates]))
    if args.format == "json":
        print(json.dumps({"matches": [wire.match_doc(m) for m in matches]}, ensure_ascii=False))
    elif args.format == "csv":
        for m in matches:
            cells = [m.name] + [_fmt_cell(m.values[c]).rstrip("*") for c in columns]
            print(",".join(cells))
    else:
        header = ["rank", "site", "name"] + columns
        widths = [len(h) for h in header]
        rows = [[str(m.rank), m.site_id, m.name] + [_fmt_cell(m.values[c]) for c in columns] for m in matches]
        for row in rows:
            widths = [max(w, len(c)) for w, c in zip(widths, row)]
        for row in [header] + rows:
            print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return 0


def _cmd_when(args) -> int:
    snapshot = load_bundle(args.bundle)
    predicate = Predicate.parse(f"{args.factor} {args.predicate}")
    for start, end in search_when(snapshot, args.site, args.factor, predicate):
        print(f"{start.isoformat()}..{end.isoformat()}")
    return 0


def _cmd_what(args) -> int:
    snapshot = load_bundle(args.bundle)
    factor_ids = [f for f in args.factors.split(",") if f]
    t = _resolve_t(snapshot, args.t)
    result = lookup_what(snapshot, args.site, factor_ids, t, mode=args.mode)
    if args.format == "json":
        print(
            json.dumps(
                {"site": args.site, "t": t.isoformat(), "values": {f: wire.agg_doc(a) for f, a in result.items()}},
                ensure_ascii=False,
            )
        )
    else:
        sep = "," if args.format == "csv" else "  "
        for fid in factor_ids:
            print(f"{fid}{sep}{_fmt_cell(result[fid]) if args.format == 'table' else _fmt_cell(result[fid]).rstrip('*')}")
    return 0


def _load_criteria(path) -> list:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SiteSelectError(f"cannot read criteria file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SiteSelectError(f"criteria file is not valid JSON: {exc}") from exc
    criteria = []
    for entry in doc:
        criteria.append(
            ChecklistCriterion(
                factor_id=entry["factor"],
                weight=float(entry["weight"]),
                plus_threshold=float(entry["plus_threshold"]),
                minus_threshold=float(entry["minus_threshold"]),
                direction=entry.get("direction", "higher_is_better"),
            )
        )
    return criteria


def _cmd_checklist(args) -> int:
    snapshot = load_bundle(args.bundle)
    site_ids = [s for s in args.sites.split(",") if s]
    table = checklist_score(snapshot, site_ids, _load_criteria(args.criteria), _resolve_t(snapshot, args.t))
    if args.format == "json":
        print(json.dumps(wire.checklist_doc(table), ensure_ascii=False))
        return 0
    sep = "," if args.format == "csv" else "  "
    for sid in table.ranking:
        ratings = sep.join(table.ratings[sid][c.factor_id] for c in table.criteria)
        print(f"{sid}{sep}{format_number(table.totals[sid])}{sep}{ratings}")
    return 0


def _cmd_choropleth(args) -> int:
    snapshot = load_bundle(args.bundle)
    try:
        w, _, h = args.size.partition("x")
        size = (int(w), int(h))
    except ValueError:
        raise SiteSelectError(f"--size must be WIDTHxHEIGHT, got {args.size!r}") from None
    layer = build_choropleth(
        snapshot, args.parent, args.factor, _resolve_t(snapshot, args.t), scheme=args.scheme, k=args.k
    )
    svg = render_choropleth_svg(snapshot, layer, size=size)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_synth(args) -> int:
    try:
        level_counts = [int(c) for c in args.levels.split(",")]
    except ValueError:
        raise SiteSelectError(f"--levels must be comma-separated integers, got {args.levels!r}") from None
    try:
        bundle = generate_synthetic(
            level_counts, args.factors, args.timepoints, args.seed, missing_rate=args.missing
        )
    except ValueError as exc:
        raise SiteSelectError(str(exc)) from None
    manifest = bundle.write(args.out)
    print(manifest)
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "serve": _cmd_serve,
    "where": _cmd_where,
    "when": _cmd_when,
    "what": _cmd_what,
    "checklist": _cmd_checklist,
    "choropleth": _cmd_choropleth,
    "synth": _cmd_synth,
}


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SiteSelectError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        if isinstance(exc, BundleError):
            for issue in exc.issues:
                print(f"  {issue.severity}: {issue.rule} [{issue.subject}] {issue.message}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

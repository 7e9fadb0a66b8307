#!/usr/bin/env python3
"""Headless walk through the supermarket site-selection case on the demo
dataset: rank counties by population, compare income, screen districts,
probe the Hamburg unemployment series, and export a choropleth SVG.

Usage: python scripts/demo_queries.py [out.svg]
"""

from __future__ import annotations

import sys

from siteselect import fixtures
from siteselect.query import Predicate, WhereQuery, compare_sites, search_when, search_where
from siteselect.svg import render_choropleth_svg
from siteselect.views import build_choropleth, format_number


def main() -> int:
    snap = fixtures.fixture_snapshot()
    t = fixtures.T0

    print("== counties of Nordrhein-Westfalen by population ==")
    ranking = search_where(
        snap, WhereQuery(level="county", t=t, scope=fixtures.NRW, rank_by=(("population", "desc"),))
    )
    for m in ranking:
        print(f"  {m.rank}. {m.name}: {format_number(m.values['population'].value)} inhabitants")

    print("== income per household, Unna vs Gütersloh ==")
    cmp = compare_sites(snap, [fixtures.UNNA, fixtures.GUETERSLOH], ["income_per_household"], t)
    for sid in cmp.rankings["income_per_household"]:
        value = cmp.matrix[sid]["income_per_household"].value
        print(f"  {snap.sites[sid].name}: EUR {format_number(value)}")

    print("== districts of Gütersloh with >= 2,500 inhabitants and no supermarket ==")
    screened = search_where(
        snap,
        WhereQuery(
            level="district",
            t=t,
            scope=fixtures.GUETERSLOH,
            predicates=(Predicate.parse("population>=2500"), Predicate.parse("supermarket_count=0")),
        ),
    )
    for m in screened:
        print(f"  {m.name} ({format_number(m.values['population'].value)} inhabitants)")

    print("== when was Hamburg's unemployment rate below 7%? ==")
    for start, end in search_when(
        snap, fixtures.HAMBURG, "unemployment_rate", Predicate.parse("unemployment_rate<7")
    ):
        print(f"  {start}..{end}")

    out = sys.argv[1] if len(sys.argv) > 1 else "nrw-population.svg"
    layer = build_choropleth(snap, fixtures.NRW, "population", t, scheme="quantile", k=4)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(render_choropleth_svg(snap, layer))
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

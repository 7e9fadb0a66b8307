/** In-memory mini dataset + fetch stub implementing the backend routes the
 * client uses. Shapes mirror the real wire documents.
 */

import type { FactorDoc, SiteDoc } from "../src/types";

export const STAMP_A = "stamp-aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa";

const LEVELS = ["nation", "state", "county", "district"];

function site(id: string, name: string, ordinal: number, parent: string | null): SiteDoc {
  return { id, name, level: LEVELS[ordinal], level_ordinal: ordinal, parent, has_geometry: true };
}

export const SITES: SiteDoc[] = [
  site("DE", "Germany", 0, null),
  site("02", "Hamburg", 1, "DE"),
  site("05", "Nordrhein-Westfalen", 1, "DE"),
  site("05558", "Coesfeld", 2, "05"),
  site("05754", "Gütersloh", 2, "05"),
  site("05974", "Soest", 2, "05"),
  site("05978", "Unna", 2, "05"),
  site("05754020", "Herzebrock-Clarholz", 3, "05754"),
  site("05754024", "Langenberg", 3, "05754"),
  site("05754036", "Rheda-Wiedenbrück", 3, "05754"),
];

export const FACTORS: FactorDoc[] = [
  {
    id: "population",
    name: "Population",
    category: "Markets",
    unit: "inhabitants",
    kind: "hard",
    aggregation: "sum",
    weight_factor: null,
    direction: "higher_is_better",
  },
  {
    id: "unemployment_rate",
    name: "Unemployment rate",
    category: "Labor",
    unit: "%",
    kind: "hard",
    aggregation: "none",
    weight_factor: null,
    direction: "lower_is_better",
  },
];

const POPULATION: Record<string, number> = {
  "02": 1_787_408,
  "05": 1_297_416,
  "05558": 220_662,
  "05754": 353_944,
  "05974": 306_131,
  "05978": 416_679,
  "05754020": 15_969,
  "05754024": 2_100,
  "05754036": 48_613,
};

const SERIES: Record<string, { t: string; value: number }[]> = {
  "02|unemployment_rate": [
    { t: "2016-05", value: 7.2 },
    { t: "2016-06", value: 6.9 },
    { t: "2016-07", value: 7.1 },
  ],
  "02|population": [{ t: "2016-01", value: 1_787_408 }],
  "05|population": [{ t: "2016-01", value: 1_297_416 }],
};

function box(id: string, x0: number, y0: number, x1: number, y1: number) {
  return {
    type: "Feature",
    properties: { site_id: id, name: SITES.find((s) => s.id === id)!.name },
    geometry: {
      type: "Polygon",
      coordinates: [[[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]],
    },
  };
}

const GEOMETRIES: Record<string, ReturnType<typeof box>> = {
  "02": box("02", 9.7, 53.4, 10.3, 53.8),
  "05": box("05", 6.0, 50.3, 9.5, 52.5),
  "05558": box("05558", 6.8, 51.7, 7.4, 52.2),
  "05754": box("05754", 8.0, 51.8, 8.6, 52.2),
  "05974": box("05974", 8.0, 51.3, 8.6, 51.7),
  "05978": box("05978", 7.5, 51.4, 7.9, 51.7),
  "05754020": box("05754020", 8.0, 51.8, 8.2, 52.2),
  "05754024": box("05754024", 8.2, 51.8, 8.4, 52.2),
  "05754036": box("05754036", 8.4, 51.8, 8.6, 52.2),
};

function childrenOf(parent: string): SiteDoc[] {
  return SITES.filter((s) => s.parent === parent).sort((a, b) => (a.name < b.name ? -1 : 1));
}

function valueAt(siteId: string, factorId: string): number | null {
  if (factorId === "population") return POPULATION[siteId] ?? null;
  return null;
}

interface FakeOptions {
  stamp?: string;
  failRoutes?: Set<string>;
  log?: string[];
}

/** A fetch-compatible function serving the mini dataset. */
export function makeFakeFetch(options: FakeOptions = {}): typeof fetch {
  const stamp = options.stamp ?? STAMP_A;

  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = new URL(String(input), "http://local");
    const route = url.pathname;
    options.log?.push(route + url.search);
    if (options.failRoutes?.has(route)) {
      return json({ code: "internal_error", message: "synthetic failure" }, 500);
    }

    if (route === "/api/health") {
      return json({
        stamp,
        source: "fake",
        default_t: "2016-01",
        counts: { sites: SITES.length, factors: FACTORS.length, values: 12 },
      });
    }
    if (route === "/api/sites") return json({ stamp, sites: SITES });
    if (route === "/api/factors") return json({ stamp, factors: FACTORS });
    if (route === "/api/levels") {
      return json({ stamp, levels: LEVELS.map((name, ordinal) => ({ ordinal, name })) });
    }
    if (route === "/api/geometries") {
      const parent = url.searchParams.get("parent")!;
      return json({
        type: "FeatureCollection",
        stamp,
        features: childrenOf(parent).map((s) => GEOMETRIES[s.id]).filter(Boolean),
      });
    }
    if (route === "/api/choropleth") {
      const parent = url.searchParams.get("parent")!;
      const factor = url.searchParams.get("factor")!;
      const k = Number(url.searchParams.get("k") ?? 5);
      const kids = childrenOf(parent);
      if (kids.length === 0) return json({ code: "childless_parent", message: parent }, 400);
      const values = kids.map((s) => valueAt(s.id, factor));
      const present = values.filter((v): v is number => v !== null).sort((a, b) => a - b);
      const classOf = (v: number | null) => {
        if (v === null) return -1;
        if (present.length < 2) return 0;
        const pos = present.indexOf(v) / (present.length - 1);
        return Math.min(k - 1, Math.floor(pos * k));
      };
      return json({
        stamp,
        parent,
        factor,
        t: url.searchParams.get("t") ?? "2016-01",
        scheme: "quantile",
        k,
        breaks: [],
        legend: Array.from({ length: k }, (_, j) => `class ${j}`),
        sites: kids.map((s, i) => ({
          site: s.id,
          name: s.name,
          value: values[i],
          coverage: values[i] === null ? 0 : 1,
          class: classOf(values[i]),
          geometry_ref: s.id,
        })),
      });
    }
    if (route === "/api/series") {
      const siteId = url.searchParams.get("site")!;
      const factor = url.searchParams.get("factor")!;
      return json({
        stamp,
        site: siteId,
        factor,
        points: SERIES[`${siteId}|${factor}`] ?? [],
      });
    }
    if (route === "/api/insights") {
      const body = JSON.parse(String(init?.body ?? "{}"));
      const primary: string = body.factors[0];
      const entries = (body.sites as string[]).map((s) => [s, valueAt(s, primary)] as const);
      const present = entries.filter(([, v]) => v !== null) as [string, number][];
      const total = present.reduce((sum, [, v]) => sum + v, 0);
      return json({
        stamp,
        t: body.t,
        pie: {
          factor: primary,
          slices: total > 0 ? present.map(([s, v]) => ({ site: s, value: v, proportion: v / total })) : [],
          missing: entries.filter(([, v]) => v === null).map(([s]) => s),
        },
        bars: {
          items: present.map(([s, v]) => ({ site: s, factor: primary, value: v })),
          scale: { [primary]: Math.max(1, ...present.map(([, v]) => Math.abs(v))) },
          missing: [],
        },
      });
    }
    if (route === "/api/table") {
      const body = JSON.parse(String(init?.body ?? "{}"));
      return json({
        stamp,
        t: body.t,
        factors: body.factors,
        units: Object.fromEntries(
          (body.factors as string[]).map((f) => [f, FACTORS.find((x) => x.id === f)?.unit ?? ""]),
        ),
        rows: (body.sites as string[]).map((s) => ({
          site: s,
          name: SITES.find((x) => x.id === s)?.name ?? s,
          cells: Object.fromEntries(
            (body.factors as string[]).map((f) => [
              f,
              { value: valueAt(s, f), coverage: valueAt(s, f) === null ? 0 : 1, partial: false },
            ]),
          ),
        })),
      });
    }
    return json({ code: "not_found", message: route }, 404);
  }) as typeof fetch;
}

function json(doc: unknown, status = 200): Response {
  return new Response(JSON.stringify(doc), {
    status,
    headers: { "content-type": "application/json" },
  });
}

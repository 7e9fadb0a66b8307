import type {
  ChoroplethDoc,
  FactorDoc,
  FeatureCollectionDoc,
  HealthDoc,
  InsightsDoc,
  LevelDoc,
  SeriesDoc,
  SiteDoc,
  TableDoc,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(input: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(input, init);
  if (!resp.ok) {
    let code = "http_error";
    let message = `${resp.status} on ${input}`;
    try {
      const doc = await resp.json();
      code = doc.code ?? code;
      message = doc.message ?? message;
    } catch {
      // non-JSON error body; keep defaults
    }
    throw new ApiError(resp.status, code, message);
  }
  return (await resp.json()) as T;
}

function post<T>(url: string, body: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
}

/** Thin typed client over the backend routes; `base` is "" when the UI is
 * served by the engine itself.
 */
export class ApiClient {
  constructor(private readonly base = "") {}

  health(): Promise<HealthDoc> {
    return request(`${this.base}/api/health`);
  }

  levels(): Promise<{ stamp: string; levels: LevelDoc[] }> {
    return request(`${this.base}/api/levels`);
  }

  allSites(): Promise<{ stamp: string; sites: SiteDoc[] }> {
    return request(`${this.base}/api/sites`);
  }

  factors(): Promise<{ stamp: string; factors: FactorDoc[] }> {
    return request(`${this.base}/api/factors`);
  }

  choropleth(parent: string, factor: string, t: string, k = 5): Promise<ChoroplethDoc> {
    const params = new URLSearchParams({ parent, factor, t, k: String(k) });
    return request(`${this.base}/api/choropleth?${params}`);
  }

  geometries(parent: string): Promise<FeatureCollectionDoc> {
    const params = new URLSearchParams({ parent });
    return request(`${this.base}/api/geometries?${params}`);
  }

  series(site: string, factor: string): Promise<SeriesDoc> {
    const params = new URLSearchParams({ site, factor });
    return request(`${this.base}/api/series?${params}`);
  }

  insights(sites: string[], factors: string[], t: string): Promise<InsightsDoc> {
    return post(`${this.base}/api/insights`, { sites, factors, t });
  }

  table(sites: string[], factors: string[], t: string): Promise<TableDoc> {
    return post(`${this.base}/api/table`, { sites, factors, t });
  }
}

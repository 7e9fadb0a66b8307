/** Wire documents served by the backend API. */

export interface SiteDoc {
  id: string;
  name: string;
  level: string;
  level_ordinal: number;
  parent: string | null;
  has_geometry: boolean;
}

export interface FactorDoc {
  id: string;
  name: string;
  category: string;
  unit: string;
  kind: "hard" | "soft";
  aggregation: "sum" | "mean" | "weighted_mean" | "none";
  weight_factor: string | null;
  direction: "higher_is_better" | "lower_is_better" | "neutral";
}

export interface AggDoc {
  value: number | null;
  coverage: number;
  partial: boolean;
}

export interface LevelDoc {
  ordinal: number;
  name: string;
}

export interface HealthDoc {
  stamp: string;
  source: string;
  default_t: string | null;
  counts: { sites: number; factors: number; values: number };
}

export interface ChoroplethSiteDoc {
  site: string;
  name: string;
  value: number | null;
  coverage: number;
  class: number;
  geometry_ref: string | null;
}

export interface ChoroplethDoc {
  stamp: string;
  parent: string;
  factor: string;
  t: string;
  scheme: string;
  k: number;
  breaks: number[];
  legend: string[];
  sites: ChoroplethSiteDoc[];
}

export type Position = [number, number];

export interface GeometryDoc {
  type: "Polygon" | "MultiPolygon";
  coordinates: Position[][] | Position[][][];
}

export interface FeatureDoc {
  type: "Feature";
  properties: { site_id: string; name: string };
  geometry: GeometryDoc;
}

export interface FeatureCollectionDoc {
  type: "FeatureCollection";
  stamp: string;
  features: FeatureDoc[];
}

export interface SeriesPointDoc {
  t: string;
  value: number;
}

export interface SeriesDoc {
  stamp: string;
  site: string;
  factor: string;
  points: SeriesPointDoc[];
}

export interface InsightsDoc {
  stamp: string;
  t: string;
  pie: {
    factor: string;
    slices: { site: string; value: number; proportion: number }[];
    missing: string[];
  };
  bars: {
    items: { site: string; factor: string; value: number }[];
    scale: Record<string, number>;
    missing: [string, string][];
  };
}

export interface TableDoc {
  stamp: string;
  t: string;
  factors: string[];
  units: Record<string, string>;
  rows: { site: string; name: string; cells: Record<string, AggDoc> }[];
}

export interface ApiErrorDoc {
  code: string;
  message: string;
}

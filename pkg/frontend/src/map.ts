/** Interactive choropleth map: the current parent's children as filled
 * polygons. Hover outlines a site in blue, click toggles selection,
 * double-click drills down, right-click rolls up (the browser context menu
 * is suppressed inside the map canvas only).
 */

import type { ChoroplethDoc, FeatureCollectionDoc, GeometryDoc, Position } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 820;
const HEIGHT = 540;
const PAD = 12;

/** Sequential light-to-dark ramp, mirroring the server's SVG export. */
export const PALETTE = [
  "#f7fbff",
  "#deebf7",
  "#c6dbef",
  "#9ecae1",
  "#6baed6",
  "#4292c6",
  "#2171b5",
  "#08519c",
  "#08306b",
];
export const NO_DATA_COLOR = "#cccccc";

export function classColor(classIndex: number, k: number): string {
  if (classIndex < 0) return NO_DATA_COLOR;
  if (k <= 1) return PALETTE[PALETTE.length - 1];
  const spread = (PALETTE.length - 1) / (k - 1);
  return PALETTE[Math.min(PALETTE.length - 1, Math.round(classIndex * spread))];
}

export interface MapHandlers {
  onHover(siteId: string | null): void;
  onClick(siteId: string): void;
  onDoubleClick(siteId: string): void;
  onRightClick(): void;
}

export interface MapView {
  element: HTMLElement;
  render(
    layer: ChoroplethDoc | null,
    geometries: FeatureCollectionDoc | null,
    selection: string[],
    hoverId: string | null,
  ): void;
}

function rings(geometry: GeometryDoc): Position[][] {
  if (geometry.type === "Polygon") return geometry.coordinates as Position[][];
  const out: Position[][] = [];
  for (const poly of geometry.coordinates as Position[][][]) out.push(...poly);
  return out;
}

export function createMapView(container: HTMLElement, handlers: MapHandlers): MapView {
  const element = document.createElement("div");
  element.className = "map-view";
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("class", "map-canvas");
  const legend = document.createElement("ul");
  legend.className = "map-legend";
  element.append(svg, legend);
  container.append(element);

  svg.addEventListener("contextmenu", (ev) => {
    ev.preventDefault(); // roll-up gesture owns right-click inside the map
    handlers.onRightClick();
  });
  svg.addEventListener("mouseleave", () => handlers.onHover(null));

  function render(
    layer: ChoroplethDoc | null,
    geometries: FeatureCollectionDoc | null,
    selection: string[],
    hoverId: string | null,
  ): void {
    svg.replaceChildren();
    legend.replaceChildren();
    if (!layer || !geometries) return;

    const geomBySite = new Map<string, GeometryDoc>();
    for (const feature of geometries.features) {
      geomBySite.set(feature.properties.site_id, feature.geometry);
    }
    const drawable = layer.sites.filter((s) => geomBySite.has(s.site));
    if (drawable.length === 0) return;

    let minLon = Infinity;
    let minLat = Infinity;
    let maxLon = -Infinity;
    let maxLat = -Infinity;
    for (const entry of drawable) {
      for (const ring of rings(geomBySite.get(entry.site)!)) {
        for (const [lon, lat] of ring) {
          minLon = Math.min(minLon, lon);
          minLat = Math.min(minLat, lat);
          maxLon = Math.max(maxLon, lon);
          maxLat = Math.max(maxLat, lat);
        }
      }
    }
    const dLon = maxLon - minLon || 1;
    const dLat = maxLat - minLat || 1;
    const scale = Math.min((WIDTH - 2 * PAD) / dLon, (HEIGHT - 2 * PAD) / dLat);
    const offX = PAD + (WIDTH - 2 * PAD - dLon * scale) / 2;
    const offY = PAD + (HEIGHT - 2 * PAD - dLat * scale) / 2;
    const project = ([lon, lat]: Position): [number, number] => [
      offX + (lon - minLon) * scale,
      offY + (maxLat - lat) * scale,
    ];

    for (const entry of drawable) {
      const path = document.createElementNS(SVG_NS, "path");
      const d = rings(geomBySite.get(entry.site)!)
        .map((ring) => "M " + ring.map((pos) => project(pos).map((c) => c.toFixed(1)).join(",")).join(" L ") + " Z")
        .join(" ");
      path.setAttribute("d", d);
      path.setAttribute("fill", classColor(entry.class, layer.k));
      path.setAttribute("data-site", entry.site);
      path.classList.add("site-shape");
      if (selection.includes(entry.site)) path.classList.add("selected");
      if (hoverId === entry.site) path.classList.add("hover");

      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = entry.value === null ? `${entry.name}: no data` : `${entry.name}: ${entry.value}`;
      path.append(title);

      path.addEventListener("mouseenter", () => handlers.onHover(entry.site));
      path.addEventListener("click", () => handlers.onClick(entry.site));
      path.addEventListener("dblclick", () => handlers.onDoubleClick(entry.site));
      svg.append(path);
    }

    for (let j = 0; j < layer.k; j += 1) {
      const item = document.createElement("li");
      const swatch = document.createElement("span");
      swatch.className = "legend-swatch";
      swatch.style.backgroundColor = classColor(j, layer.k);
      item.append(swatch, document.createTextNode(layer.legend[j] ?? `class ${j}`));
      legend.append(item);
    }
  }

  return { element, render };
}

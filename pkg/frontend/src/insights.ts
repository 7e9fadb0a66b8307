/** Side panel "insights": a pie of the primary factor's proportions across
 * the selected sites, and per-factor bars with length proportional to value.
 */

import type { FactorDoc, InsightsDoc } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const PIE_SIZE = 180;
const SLICE_COLORS = ["#1b6ca8", "#c23b22", "#2e8540", "#8031a7", "#b8860b", "#008080", "#555555"];

export interface InsightsView {
  element: HTMLElement;
  render(doc: InsightsDoc | null, names: Map<string, string>, factors: Map<string, FactorDoc>): void;
}

function arcPath(cx: number, cy: number, r: number, start: number, end: number): string {
  const sx = cx + r * Math.cos(start);
  const sy = cy + r * Math.sin(start);
  const ex = cx + r * Math.cos(end);
  const ey = cy + r * Math.sin(end);
  const large = end - start > Math.PI ? 1 : 0;
  return `M ${cx} ${cy} L ${sx.toFixed(2)} ${sy.toFixed(2)} A ${r} ${r} 0 ${large} 1 ${ex.toFixed(2)} ${ey.toFixed(2)} Z`;
}

export function createInsightsView(container: HTMLElement): InsightsView {
  const element = document.createElement("section");
  element.className = "insights-view panel";
  const heading = document.createElement("h2");
  heading.textContent = "Insights";
  const body = document.createElement("div");
  body.className = "panel-body";
  element.append(heading, body);
  container.append(element);

  function render(
    doc: InsightsDoc | null,
    names: Map<string, string>,
    factors: Map<string, FactorDoc>,
  ): void {
    body.replaceChildren();
    if (!doc) {
      const hint = document.createElement("p");
      hint.className = "guidance";
      hint.textContent = "Select sites on the map to compare them here.";
      body.append(hint);
      return;
    }

    const pieTitle = document.createElement("h3");
    const pieFactor = factors.get(doc.pie.factor);
    pieTitle.textContent = `Share of ${pieFactor?.name ?? doc.pie.factor}`;
    body.append(pieTitle);

    if (doc.pie.slices.length > 0) {
      const svg = document.createElementNS(SVG_NS, "svg");
      svg.setAttribute("viewBox", `0 0 ${PIE_SIZE} ${PIE_SIZE}`);
      svg.setAttribute("class", "pie-canvas");
      const c = PIE_SIZE / 2;
      const r = PIE_SIZE / 2 - 4;
      let angle = -Math.PI / 2;
      doc.pie.slices.forEach((slice, i) => {
        const sweep = slice.proportion * 2 * Math.PI;
        const el =
          doc.pie.slices.length === 1
            ? document.createElementNS(SVG_NS, "circle")
            : document.createElementNS(SVG_NS, "path");
        if (el.tagName === "circle") {
          el.setAttribute("cx", String(c));
          el.setAttribute("cy", String(c));
          el.setAttribute("r", String(r));
        } else {
          el.setAttribute("d", arcPath(c, c, r, angle, angle + sweep));
        }
        el.setAttribute("fill", SLICE_COLORS[i % SLICE_COLORS.length]);
        el.setAttribute("data-site", slice.site);
        el.classList.add("pie-slice");
        const title = document.createElementNS(SVG_NS, "title");
        title.textContent = `${names.get(slice.site) ?? slice.site}: ${(slice.proportion * 100).toFixed(1)}%`;
        el.append(title);
        svg.append(el);
        angle += sweep;
      });
      body.append(svg);
    }
    if (doc.pie.missing.length > 0) {
      const missing = document.createElement("p");
      missing.className = "missing-note";
      missing.textContent =
        "No data: " + doc.pie.missing.map((id) => names.get(id) ?? id).join(", ");
      body.append(missing);
    }

    const barTitle = document.createElement("h3");
    barTitle.textContent = "Factor values";
    const bars = document.createElement("div");
    bars.className = "bar-list";
    for (const item of doc.bars.items) {
      const scale = doc.bars.scale[item.factor] || 1;
      const row = document.createElement("div");
      row.className = "bar-row";
      const label = document.createElement("span");
      label.className = "bar-label";
      const factor = factors.get(item.factor);
      label.textContent = `${names.get(item.site) ?? item.site} · ${factor?.name ?? item.factor}`;
      const track = document.createElement("span");
      track.className = "bar-track";
      const fill = document.createElement("span");
      fill.className = "bar-fill";
      fill.style.width = `${Math.round((Math.abs(item.value) / scale) * 100)}%`;
      fill.setAttribute("data-site", item.site);
      fill.setAttribute("data-factor", item.factor);
      const value = document.createElement("span");
      value.className = "bar-value";
      value.textContent = `${item.value}${factor?.unit ? " " + factor.unit : ""}`;
      track.append(fill);
      row.append(label, track, value);
      bars.append(row);
    }
    body.append(barTitle, bars);
  }

  return { element, render };
}

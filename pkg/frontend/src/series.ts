/** Time-series graph for the selected sites (one factor at a time): one
 * line per site, an optional horizontal reference line, and a highlighted
 * line linked to the map hover. Hovering a line highlights the site on the
 * map too (the reverse linkage).
 */

import type { SeriesDoc } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 260;
const PAD_LEFT = 58;
const PAD_RIGHT = 14;
const PAD_TOP = 12;
const PAD_BOTTOM = 26;

const LINE_COLORS = ["#1b6ca8", "#c23b22", "#2e8540", "#8031a7", "#b8860b", "#008080"];

export interface SeriesView {
  element: HTMLElement;
  render(
    series: SeriesDoc[],
    names: Map<string, string>,
    reference: number | null,
    highlightId: string | null,
  ): void;
}

export function createSeriesView(
  container: HTMLElement,
  onHover: (siteId: string | null) => void,
): SeriesView {
  const element = document.createElement("div");
  element.className = "series-view";
  const heading = document.createElement("h2");
  heading.textContent = "Time series";
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("class", "series-canvas");
  const hint = document.createElement("p");
  hint.className = "guidance";
  element.append(heading, svg, hint);
  container.append(element);

  function render(
    series: SeriesDoc[],
    names: Map<string, string>,
    reference: number | null,
    highlightId: string | null,
  ): void {
    svg.replaceChildren();
    const points = series.flatMap((doc) => doc.points);
    if (series.length === 0) {
      hint.textContent = "Select sites on the map to see their history.";
      return;
    }
    hint.textContent = points.length === 0 ? "No observations for this factor." : "";

    const times = [...new Set(points.map((p) => p.t))].sort();
    const values = points.map((p) => p.value);
    if (reference !== null) values.push(reference);
    let lo = values.length ? Math.min(...values) : 0;
    let hi = values.length ? Math.max(...values) : 1;
    if (lo === hi) {
      lo -= 1;
      hi += 1;
    }
    const innerW = WIDTH - PAD_LEFT - PAD_RIGHT;
    const innerH = HEIGHT - PAD_TOP - PAD_BOTTOM;
    const x = (t: string) =>
      PAD_LEFT + (times.length === 1 ? innerW / 2 : (times.indexOf(t) / (times.length - 1)) * innerW);
    const y = (v: number) => PAD_TOP + ((hi - v) / (hi - lo)) * innerH;

    const axis = document.createElementNS(SVG_NS, "g");
    axis.setAttribute("class", "axes");
    for (const [v, anchor] of [
      [hi, "top"],
      [lo, "bottom"],
    ] as [number, string][]) {
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", "4");
      label.setAttribute("y", String(y(v) + 4));
      label.setAttribute("class", `axis-label axis-${anchor}`);
      label.textContent = String(v);
      axis.append(label);
    }
    for (const t of [times[0], times[times.length - 1]]) {
      if (t === undefined) continue;
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(x(t)));
      label.setAttribute("y", String(HEIGHT - 8));
      label.setAttribute("class", "axis-label");
      label.textContent = t;
      axis.append(label);
    }
    svg.append(axis);

    if (reference !== null) {
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(PAD_LEFT));
      line.setAttribute("x2", String(WIDTH - PAD_RIGHT));
      line.setAttribute("y1", String(y(reference)));
      line.setAttribute("y2", String(y(reference)));
      line.setAttribute("class", "reference-line");
      line.setAttribute("data-value", String(reference));
      svg.append(line);
    }

    series.forEach((doc, i) => {
      if (doc.points.length === 0) return;
      const poly = document.createElementNS(SVG_NS, "polyline");
      poly.setAttribute(
        "points",
        doc.points.map((p) => `${x(p.t).toFixed(1)},${y(p.value).toFixed(1)}`).join(" "),
      );
      poly.setAttribute("fill", "none");
      poly.setAttribute("stroke", LINE_COLORS[i % LINE_COLORS.length]);
      poly.setAttribute("data-site", doc.site);
      poly.classList.add("series-line");
      if (doc.site === highlightId) poly.classList.add("highlight");
      poly.addEventListener("mouseenter", () => onHover(doc.site));
      poly.addEventListener("mouseleave", () => onHover(null));
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = names.get(doc.site) ?? doc.site;
      poly.append(title);
      svg.append(poly);
    });
  }

  return { element, render };
}

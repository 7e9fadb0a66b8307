/** Wires everything together: one state drives map, series graph, insights
 * and table. Every user event goes through the reducer; every fetch batch
 * is tagged with a sequence number and only the latest tag may commit to
 * the view, so stale responses are discarded. A changed provenance stamp
 * (server-side reload) triggers one full catalog refresh.
 */

import { ApiClient } from "./api";
import { buildSiteIndex, SiteIndex } from "./hierarchy";
import { createInsightsView } from "./insights";
import { createMapView } from "./map";
import { createSeriesView } from "./series";
import {
  DEEPEST_LEVEL_NOTICE,
  ExplorationEvent,
  ExplorationState,
  initialState,
  reduce,
} from "./state";
import { syncViews } from "./sync";
import { createTableView } from "./table";
import type { FactorDoc, InsightsDoc, SeriesDoc, TableDoc } from "./types";

export interface App {
  element: HTMLElement;
  state(): ExplorationState;
  dispatch(event: ExplorationEvent): void;
  whenIdle(): Promise<void>;
  index(): SiteIndex;
}

interface PanelDocs {
  layer: import("./types").ChoroplethDoc | null;
  geometries: import("./types").FeatureCollectionDoc | null;
  series: SeriesDoc[];
  insights: InsightsDoc | null;
  table: TableDoc | null;
}

export async function createApp(root: HTMLElement, api: ApiClient): Promise<App> {
  const [health, sitesDoc, factorsDoc] = await Promise.all([
    api.health(),
    api.allSites(),
    api.factors(),
  ]);
  let index = buildSiteIndex(sitesDoc.sites);
  let factorList: FactorDoc[] = factorsDoc.factors;
  let factorMap = new Map(factorList.map((f) => [f.id, f]));
  let knownStamp = health.stamp;

  const firstFactor = factorList.find((f) => f.kind === "hard") ?? factorList[0];
  if (!firstFactor) throw new Error("dataset has no factors to explore");
  let state = initialState(index.rootId(), [firstFactor.id], health.default_t ?? "2000-01");

  // --- static chrome -------------------------------------------------------
  const element = document.createElement("div");
  element.className = "exploration-app";
  element.innerHTML = `
    <header class="toolbar">
      <nav class="breadcrumb" aria-label="hierarchy path"></nav>
      <span class="notice" role="status"></span>
    </header>
    <div class="columns">
      <div class="map-column">
        <div class="map-slot"></div>
        <p class="map-help">hover: outline · click: select · double-click: drill down · right-click: roll up</p>
      </div>
      <div class="side-column">
        <section class="panel controls-panel">
          <h2>Factors</h2>
          <ul class="factor-list"></ul>
          <label>Time <input class="time-input" size="8"></label>
          <button class="time-apply">apply</button>
          <label>Reference <input class="reference-input" type="number" step="any"></label>
          <button class="reference-apply">set</button>
          <button class="reference-clear">clear</button>
        </section>
        <div class="series-slot"></div>
        <div class="insights-slot"></div>
        <div class="table-slot"></div>
      </div>
    </div>`;
  root.append(element);

  const breadcrumb = element.querySelector(".breadcrumb") as HTMLElement;
  const noticeEl = element.querySelector(".notice") as HTMLElement;
  const factorListEl = element.querySelector(".factor-list") as HTMLElement;
  const timeInput = element.querySelector(".time-input") as HTMLInputElement;
  const referenceInput = element.querySelector(".reference-input") as HTMLInputElement;

  const names = new Map(sitesDoc.sites.map((s) => [s.id, s.name]));
  const mapView = createMapView(element.querySelector(".map-slot") as HTMLElement, {
    onHover: (siteId) => dispatch(siteId ? { type: "hover", siteId } : { type: "unhover" }),
    onClick: (siteId) => dispatch({ type: "click", siteId }),
    onDoubleClick: (siteId) => dispatch({ type: "double_click", siteId }),
    onRightClick: () => dispatch({ type: "right_click" }),
  });
  const seriesView = createSeriesView(element.querySelector(".series-slot") as HTMLElement, (siteId) =>
    dispatch(siteId ? { type: "hover", siteId } : { type: "unhover" }),
  );
  const insightsView = createInsightsView(element.querySelector(".insights-slot") as HTMLElement);
  const tableView = createTableView(element.querySelector(".table-slot") as HTMLElement);

  element.querySelector(".time-apply")!.addEventListener("click", () => {
    if (timeInput.value.trim()) dispatch({ type: "set_time", t: timeInput.value.trim() });
  });
  element.querySelector(".reference-apply")!.addEventListener("click", () => {
    const value = Number(referenceInput.value);
    if (referenceInput.value !== "" && Number.isFinite(value)) {
      dispatch({ type: "set_reference", value });
    }
  });
  element.querySelector(".reference-clear")!.addEventListener("click", () =>
    dispatch({ type: "clear_reference" }),
  );

  // --- fetch/render cycle ---------------------------------------------------
  let seq = 0;
  let pending: Promise<void> = Promise.resolve();
  const docs: PanelDocs = { layer: null, geometries: null, series: [], insights: null, table: null };
  const panelErrors = new Map<string, string>();

  function dispatch(event: ExplorationEvent): void {
    const next = reduce(index, state, event);
    if (next === state) {
      renderChrome();
      return;
    }
    const presentationOnly = event.type === "hover" || event.type === "unhover";
    state = next;
    renderChrome();
    if (presentationOnly) {
      renderPanels(); // cached documents are still valid; only highlights move
    } else {
      seq += 1;
      pending = refresh(seq);
    }
  }

  async function fetchGroup<T>(panel: string, work: () => Promise<T>, fallback: T): Promise<T> {
    try {
      const doc = await work();
      panelErrors.delete(panel);
      return doc;
    } catch (err) {
      panelErrors.set(panel, err instanceof Error ? err.message : String(err));
      return fallback;
    }
  }

  async function refresh(tag: number): Promise<void> {
    const requests = syncViews(state);
    const [layerAndGeoms, series, insights, table] = await Promise.all([
      fetchGroup(
        "map",
        () =>
          Promise.all([
            api.choropleth(requests.map.parent, requests.map.factor, requests.map.t),
            api.geometries(requests.geometries.parent),
          ]),
        null,
      ),
      requests.series
        ? fetchGroup(
            "series",
            () => Promise.all(requests.series!.sites.map((s) => api.series(s, requests.series!.factor))),
            [],
          )
        : Promise.resolve([]),
      requests.insights
        ? fetchGroup(
            "insights",
            () => api.insights(requests.insights!.sites, requests.insights!.factors, requests.insights!.t),
            null,
          )
        : Promise.resolve(null),
      requests.table
        ? fetchGroup(
            "table",
            () => api.table(requests.table!.sites, requests.table!.factors, requests.table!.t),
            null,
          )
        : Promise.resolve(null),
    ]);
    if (tag !== seq) return; // a newer state superseded this batch
    docs.layer = layerAndGeoms ? layerAndGeoms[0] : null;
    docs.geometries = layerAndGeoms ? layerAndGeoms[1] : null;
    docs.series = series;
    docs.insights = insights;
    docs.table = table;
    renderPanels();
    const stamp = docs.layer?.stamp;
    if (stamp && stamp !== knownStamp) {
      knownStamp = stamp;
      await refreshCatalog();
    }
  }

  async function refreshCatalog(): Promise<void> {
    const [sites, factors] = await Promise.all([api.allSites(), api.factors()]);
    index = buildSiteIndex(sites.sites);
    names.clear();
    for (const s of sites.sites) names.set(s.id, s.name);
    factorList = factors.factors;
    factorMap = new Map(factorList.map((f) => [f.id, f]));
    if (!index.has(state.parentId)) {
      state = initialState(index.rootId(), [factorList[0].id], state.t);
    }
    renderChrome();
    seq += 1;
    pending = refresh(seq);
  }

  function renderChrome(): void {
    noticeEl.textContent = state.notice ?? "";
    noticeEl.classList.toggle("visible", state.notice !== null);

    breadcrumb.replaceChildren();
    const path = index.pathToRoot(state.parentId).reverse();
    path.forEach((id, i) => {
      const step = document.createElement("button");
      step.className = "crumb";
      step.dataset.site = id;
      step.textContent = names.get(id) ?? id;
      step.disabled = i === path.length - 1;
      step.addEventListener("click", () => dispatch({ type: "double_click", siteId: id }));
      breadcrumb.append(step);
      if (i < path.length - 1) breadcrumb.append(document.createTextNode(" › "));
    });

    factorListEl.replaceChildren();
    for (const factor of factorList) {
      const item = document.createElement("li");
      const checkbox = document.createElement("input");
      checkbox.type = "checkbox";
      checkbox.checked = state.factorIds.includes(factor.id);
      checkbox.dataset.factor = factor.id;
      checkbox.addEventListener("change", () => {
        const next = checkbox.checked
          ? [...state.factorIds, factor.id]
          : state.factorIds.filter((id) => id !== factor.id);
        dispatch({ type: "set_factors", factorIds: next });
      });
      const label = document.createElement("button");
      label.className = "factor-name" + (state.factorIds[0] === factor.id ? " primary" : "");
      label.textContent = factor.name;
      label.title = "make this the map factor";
      label.addEventListener("click", () =>
        dispatch({
          type: "set_factors",
          factorIds: [factor.id, ...state.factorIds.filter((id) => id !== factor.id)],
        }),
      );
      item.append(checkbox, label);
      factorListEl.append(item);
    }
    if (timeInput.value !== state.t) timeInput.value = state.t;
  }

  function renderPanels(): void {
    mapView.render(docs.layer, docs.geometries, state.selection, state.hoverId);
    seriesView.render(docs.series, names, state.reference, state.hoverId);
    insightsView.render(state.selection.length ? docs.insights : null, names, factorMap);
    tableView.render(state.selection.length ? docs.table : null, factorMap);
    for (const panel of ["map", "series", "insights", "table"]) {
      const slot = element.querySelector(`.${panel === "map" ? "map-column" : panel + "-slot"}`) as HTMLElement;
      let banner = slot.querySelector(".error-banner") as HTMLElement | null;
      const message = panelErrors.get(panel);
      if (message) {
        if (!banner) {
          banner = document.createElement("p");
          banner.className = "error-banner";
          slot.prepend(banner);
        }
        banner.textContent = `could not load ${panel}: ${message}`;
      } else if (banner) {
        banner.remove();
      }
    }
  }

  renderChrome();
  seq += 1;
  pending = refresh(seq);

  return {
    element,
    state: () => state,
    dispatch,
    whenIdle: async () => {
      // successive batches may supersede one another; settle them all
      let last: Promise<void>;
      do {
        last = pending;
        await last;
      } while (last !== pending);
    },
    index: () => index,
  };
}

export { DEEPEST_LEVEL_NOTICE };

import { describe, expect, it } from "vitest";

import { buildSiteIndex } from "../src/hierarchy";
import { initialState, reduce } from "../src/state";
import { syncViews } from "../src/sync";
import { SITES } from "./fakeApi";

const index = buildSiteIndex(SITES);

describe("syncViews", () => {
  it("a one-site selection with a reference produces a series request carrying both", () => {
    let state = initialState("DE", ["unemployment_rate"], "2016-01");
    state = reduce(index, state, { type: "click", siteId: "02" });
    state = reduce(index, state, { type: "set_reference", value: 7.0 });
    const requests = syncViews(state);
    expect(requests.series).toEqual({
      sites: ["02"],
      factor: "unemployment_rate",
      reference: 7.0,
      highlight: null,
    });
  });

  it("hovering a selected site becomes the series highlight", () => {
    let state = initialState("DE", ["population"], "2016-01");
    state = reduce(index, state, { type: "double_click", siteId: "05" });
    state = reduce(index, state, { type: "click", siteId: "05978" });
    state = reduce(index, state, { type: "click", siteId: "05974" });
    state = reduce(index, state, { type: "hover", siteId: "05974" });
    expect(syncViews(state).series?.highlight).toBe("05974");
  });

  it("an empty selection requests no series, insights or table", () => {
    const requests = syncViews(initialState("DE", ["population"], "2016-01"));
    expect(requests.series).toBeNull();
    expect(requests.insights).toBeNull();
    expect(requests.table).toBeNull();
    expect(requests.map).toEqual({ parent: "DE", factor: "population", t: "2016-01" });
  });

  it("every panel request is derived from the one current state", () => {
    let state = initialState("DE", ["population", "unemployment_rate"], "2016-01");
    state = reduce(index, state, { type: "double_click", siteId: "05" });
    state = reduce(index, state, { type: "click", siteId: "05754" });
    state = reduce(index, state, { type: "set_time", t: "2016-06" });
    const requests = syncViews(state);
    expect(requests.map).toEqual({ parent: "05", factor: "population", t: "2016-06" });
    expect(requests.insights).toEqual({
      sites: ["05754"],
      factors: ["population", "unemployment_rate"],
      t: "2016-06",
    });
    expect(requests.table).toEqual(requests.insights);
    expect(requests.geometries).toEqual({ parent: "05" });
  });

  it("closed panels request nothing", () => {
    let state = initialState("DE", ["population"], "2016-01");
    state = reduce(index, state, { type: "click", siteId: "02" });
    state = reduce(index, state, { type: "toggle_panel", panel: "insights" });
    const requests = syncViews(state);
    expect(requests.insights).toBeNull();
    expect(requests.table).not.toBeNull();
  });
});

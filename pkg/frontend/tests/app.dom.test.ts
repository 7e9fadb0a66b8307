// @vitest-environment jsdom

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import { App, createApp } from "../src/app";
import { makeFakeFetch } from "./fakeApi";

let app: App;
let root: HTMLElement;

function mapPaths(): string[] {
  return [...root.querySelectorAll<SVGPathElement>(".map-canvas path")].map(
    (p) => p.dataset.site ?? "",
  );
}

function pathFor(siteId: string): SVGPathElement {
  const el = root.querySelector<SVGPathElement>(`.map-canvas path[data-site="${siteId}"]`);
  if (!el) throw new Error(`no map path for ${siteId}; have ${mapPaths().join(", ")}`);
  return el;
}

function fire(el: Element, type: string): void {
  el.dispatchEvent(new MouseEvent(type, { bubbles: true, cancelable: true }));
}

async function settle(): Promise<void> {
  await app.whenIdle();
}

beforeEach(async () => {
  vi.stubGlobal("fetch", makeFakeFetch());
  root = document.createElement("div");
  document.body.append(root);
  app = await createApp(root, new ApiClient("http://local"));
  await settle();
});

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.replaceChildren();
});

describe("drill-down and roll-up on the map", () => {
  it("starts at the root scope showing the states", () => {
    expect(new Set(mapPaths())).toEqual(new Set(["02", "05"]));
  });

  it("double-clicking a county renders its district polygons; right-click returns", async () => {
    fire(pathFor("05"), "dblclick");
    await settle();
    expect(new Set(mapPaths())).toEqual(new Set(["05558", "05754", "05974", "05978"]));

    fire(pathFor("05754"), "dblclick");
    await settle();
    expect(new Set(mapPaths())).toEqual(new Set(["05754020", "05754024", "05754036"]));

    fire(root.querySelector(".map-canvas")!, "contextmenu");
    await settle();
    expect(new Set(mapPaths())).toEqual(new Set(["05558", "05754", "05974", "05978"]));
  });

  it("double-clicking a leaf shows the deepest-level notice and keeps the scope", async () => {
    fire(pathFor("05"), "dblclick");
    await settle();
    fire(pathFor("05754"), "dblclick");
    await settle();
    fire(pathFor("05754020"), "dblclick");
    await settle();
    expect(root.querySelector(".notice")!.textContent).toContain("deepest level");
    expect(new Set(mapPaths())).toEqual(new Set(["05754020", "05754024", "05754036"]));
  });

  it("breadcrumb reflects the path and jumps back up", async () => {
    fire(pathFor("05"), "dblclick");
    await settle();
    fire(pathFor("05754"), "dblclick");
    await settle();
    const crumbs = [...root.querySelectorAll<HTMLButtonElement>(".crumb")];
    expect(crumbs.map((c) => c.dataset.site)).toEqual(["DE", "05", "05754"]);
    crumbs[0].click();
    await settle();
    expect(new Set(mapPaths())).toEqual(new Set(["02", "05"]));
  });
});

describe("map, series graph and panels stay linked", () => {
  it("selecting Hamburg adds its line; reference 7.0 draws the horizontal line", async () => {
    app.dispatch({ type: "set_factors", factorIds: ["unemployment_rate"] });
    await settle();
    fire(pathFor("02"), "click");
    await settle();

    const line = root.querySelector<SVGPolylineElement>('.series-canvas polyline[data-site="02"]');
    expect(line).not.toBeNull();
    expect(line!.getAttribute("points")!.split(" ")).toHaveLength(3);

    const referenceInput = root.querySelector<HTMLInputElement>(".reference-input")!;
    referenceInput.value = "7.0";
    (root.querySelector(".reference-apply") as HTMLButtonElement).click();
    await settle();
    const reference = root.querySelector<SVGLineElement>(".series-canvas .reference-line");
    expect(reference).not.toBeNull();
    expect(reference!.getAttribute("data-value")).toBe("7");
  });

  it("hover links map to graph and back", async () => {
    app.dispatch({ type: "set_factors", factorIds: ["unemployment_rate"] });
    await settle();
    fire(pathFor("02"), "click");
    await settle();

    fire(pathFor("02"), "mouseenter");
    await settle();
    expect(pathFor("02").classList.contains("hover")).toBe(true);
    let line = root.querySelector('.series-canvas polyline[data-site="02"]')!;
    expect(line.classList.contains("highlight")).toBe(true);

    fire(root.querySelector(".map-canvas")!, "mouseleave");
    await settle();
    line = root.querySelector('.series-canvas polyline[data-site="02"]')!;
    expect(line.classList.contains("highlight")).toBe(false);

    fire(line, "mouseenter");
    await settle();
    expect(pathFor("02").classList.contains("hover")).toBe(true);
  });

  it("selection fills insights and table; empty selection shows guidance", async () => {
    expect(root.querySelector(".insights-view .guidance")).not.toBeNull();
    fire(pathFor("05"), "dblclick");
    await settle();
    fire(pathFor("05978"), "click");
    await settle();
    fire(pathFor("05754"), "click");
    await settle();

    const slices = root.querySelectorAll(".pie-canvas .pie-slice");
    expect(slices.length).toBe(2);
    const cells = [...root.querySelectorAll(".data-table tbody tr")].map(
      (tr) => tr.textContent ?? "",
    );
    expect(cells.some((text) => text.includes("Unna") && text.includes("416679"))).toBe(true);

    fire(pathFor("05978"), "click");
    await settle();
    fire(pathFor("05754"), "click");
    await settle();
    expect(root.querySelector(".insights-view .guidance")).not.toBeNull();
  });

  it("selection clears on drill-down (new sibling set on screen)", async () => {
    fire(pathFor("05"), "dblclick");
    await settle();
    fire(pathFor("05978"), "click");
    await settle();
    expect(app.state().selection).toEqual(["05978"]);
    fire(pathFor("05754"), "dblclick");
    await settle();
    expect(app.state().selection).toEqual([]);
    expect(root.querySelector(".insights-view .guidance")).not.toBeNull();
  });
});

describe("failure and staleness handling", () => {
  it("a failing panel shows an error banner without corrupting the state", async () => {
    vi.stubGlobal("fetch", makeFakeFetch({ failRoutes: new Set(["/api/insights"]) }));
    fire(pathFor("05"), "dblclick");
    await settle();
    fire(pathFor("05978"), "click");
    await settle();
    expect(root.querySelector(".insights-slot .error-banner")).not.toBeNull();
    expect(app.state().selection).toEqual(["05978"]); // state unharmed
    expect(root.querySelector(".data-table")).not.toBeNull(); // other panels fine
  });

  it("responses for superseded states never commit", async () => {
    const real = makeFakeFetch();
    let delayNext: Promise<void> | null = null;
    vi.stubGlobal(
      "fetch",
      (async (input: RequestInfo | URL, init?: RequestInit) => {
        const hold = delayNext;
        if (hold && String(input).includes("/api/choropleth")) {
          delayNext = null;
          await hold;
        }
        return (real as unknown as typeof fetch)(input, init);
      }) as typeof fetch,
    );

    let release!: () => void;
    delayNext = new Promise((resolve) => (release = resolve));
    fire(pathFor("05"), "dblclick"); // slow batch (held choropleth)
    fire(root.querySelector(".map-canvas")!, "contextmenu"); // fast batch back at root
    await app.whenIdle();
    release();
    await app.whenIdle();
    await Promise.resolve();
    expect(app.state().parentId).toBe("DE");
    expect(new Set(mapPaths())).toEqual(new Set(["02", "05"])); // stale counties never rendered
  });
});

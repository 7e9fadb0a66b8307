import type { Hierarchy } from "./state";
import type { SiteDoc } from "./types";

export interface SiteIndex extends Hierarchy {
  get(id: string): SiteDoc | undefined;
  rootId(): string;
  pathToRoot(id: string): string[];
}

/** Index the full site list (served by GET /api/sites) for navigation. */
export function buildSiteIndex(sites: SiteDoc[]): SiteIndex {
  const byId = new Map<string, SiteDoc>();
  const children = new Map<string, string[]>();
  for (const site of sites) {
    byId.set(site.id, site);
    if (!children.has(site.id)) children.set(site.id, []);
  }
  for (const site of sites) {
    if (site.parent !== null && byId.has(site.parent)) {
      children.get(site.parent)!.push(site.id);
    }
  }
  for (const ids of children.values()) {
    ids.sort((a, b) => {
      const na = byId.get(a)!.name;
      const nb = byId.get(b)!.name;
      return na < nb ? -1 : na > nb ? 1 : a < b ? -1 : 1;
    });
  }
  const roots = sites
    .filter((s) => s.parent === null)
    .sort((a, b) => (a.name < b.name ? -1 : 1))
    .map((s) => s.id);

  return {
    has: (id) => byId.has(id),
    parentOf: (id) => byId.get(id)?.parent ?? null,
    childrenOf: (id) => children.get(id) ?? [],
    get: (id) => byId.get(id),
    rootId: () => {
      if (roots.length === 0) throw new Error("site list has no root");
      return roots[0];
    },
    pathToRoot: (id) => {
      const path: string[] = [];
      let cur: string | null = id;
      while (cur !== null && byId.has(cur)) {
        path.push(cur);
        cur = byId.get(cur)!.parent;
      }
      return path;
    },
  };
}

/** Single source of truth for every panel: one ExplorationState, mutated
 * only through the pure reducer below. Drill-down and roll-up change the
 * map scope (current parent); clicking toggles sites in the selection set;
 * the first selected factor drives the choropleth.
 */

export interface ExplorationState {
  /** Map scope: the site whose children are currently shown. */
  parentId: string;
  /** Selected child sites, in click order (always ⊆ children(parentId)). */
  selection: string[];
  hoverId: string | null;
  /** Selected factor ids; factorIds[0] colors the map. Never empty. */
  factorIds: string[];
  /** Current time point, ISO "YYYY-MM". */
  t: string;
  /** Horizontal reference line for the series graph, if any. */
  reference: number | null;
  /** One-shot notice, e.g. trying to drill below the deepest level. */
  notice: string | null;
  panels: { insights: boolean; table: boolean };
}

export type ExplorationEvent =
  | { type: "hover"; siteId: string }
  | { type: "unhover" }
  | { type: "double_click"; siteId: string }
  | { type: "right_click" }
  | { type: "click"; siteId: string }
  | { type: "set_factors"; factorIds: string[] }
  | { type: "set_time"; t: string }
  | { type: "set_reference"; value: number }
  | { type: "clear_reference" }
  | { type: "toggle_panel"; panel: "insights" | "table" };

/** Read-only view of the administrative tree the reducer navigates. */
export interface Hierarchy {
  has(id: string): boolean;
  parentOf(id: string): string | null;
  childrenOf(id: string): string[];
}

export const DEEPEST_LEVEL_NOTICE = "deepest level: this site has no further subdivisions";

export function initialState(parentId: string, factorIds: string[], t: string): ExplorationState {
  return {
    parentId,
    selection: [],
    hoverId: null,
    factorIds,
    t,
    reference: null,
    notice: null,
    panels: { insights: true, table: true },
  };
}

/** Pure and total: unknown sites and impossible transitions return the
 * state unchanged rather than throwing. Same (state, event) in, same
 * state out.
 */
export function reduce(
  h: Hierarchy,
  state: ExplorationState,
  event: ExplorationEvent,
): ExplorationState {
  switch (event.type) {
    case "hover": {
      if (!h.childrenOf(state.parentId).includes(event.siteId)) return state;
      if (state.hoverId === event.siteId) return state;
      return { ...state, hoverId: event.siteId };
    }
    case "unhover":
      return state.hoverId === null ? state : { ...state, hoverId: null };
    case "double_click": {
      if (!h.has(event.siteId)) return state;
      if (h.childrenOf(event.siteId).length === 0) {
        return { ...state, notice: DEEPEST_LEVEL_NOTICE };
      }
      // selection clears: a new sibling set is on screen
      return { ...state, parentId: event.siteId, selection: [], hoverId: null, notice: null };
    }
    case "right_click": {
      const up = h.parentOf(state.parentId);
      if (up === null) return state;
      return { ...state, parentId: up, selection: [], hoverId: null, notice: null };
    }
    case "click": {
      if (!h.childrenOf(state.parentId).includes(event.siteId)) return state;
      const selection = state.selection.includes(event.siteId)
        ? state.selection.filter((id) => id !== event.siteId)
        : [...state.selection, event.siteId];
      return { ...state, selection };
    }
    case "set_factors": {
      const unique = [...new Set(event.factorIds)];
      if (unique.length === 0) return state; // the map always needs a factor
      return { ...state, factorIds: unique };
    }
    case "set_time":
      return state.t === event.t ? state : { ...state, t: event.t };
    case "set_reference":
      return Number.isFinite(event.value) ? { ...state, reference: event.value } : state;
    case "clear_reference":
      return state.reference === null ? state : { ...state, reference: null };
    case "toggle_panel":
      return { ...state, panels: { ...state.panels, [event.panel]: !state.panels[event.panel] } };
  }
}

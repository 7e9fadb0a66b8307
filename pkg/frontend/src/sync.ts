/** Derives, from the single exploration state, exactly the API requests
 * each panel needs. Every rendered panel's parameters are a pure function
 * of the current state, which is what keeps the views linked.
 */

import type { ExplorationState } from "./state";

export interface MapRequest {
  parent: string;
  factor: string;
  t: string;
}

export interface SeriesRequest {
  sites: string[];
  factor: string;
  reference: number | null;
  highlight: string | null;
}

export interface PanelRequest {
  sites: string[];
  factors: string[];
  t: string;
}

export interface ViewRequests {
  map: MapRequest;
  geometries: { parent: string };
  series: SeriesRequest | null;
  insights: PanelRequest | null;
  table: PanelRequest | null;
}

export function syncViews(state: ExplorationState): ViewRequests {
  const factor = state.factorIds[0];
  const hasSelection = state.selection.length > 0;
  const panelRequest: PanelRequest | null = hasSelection
    ? { sites: [...state.selection], factors: [...state.factorIds], t: state.t }
    : null;
  return {
    map: { parent: state.parentId, factor, t: state.t },
    geometries: { parent: state.parentId },
    series: hasSelection
      ? {
          sites: [...state.selection],
          factor,
          reference: state.reference,
          highlight: state.hoverId,
        }
      : null,
    insights: state.panels.insights ? panelRequest : null,
    table: state.panels.table ? panelRequest : null,
  };
}

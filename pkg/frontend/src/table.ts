/** Side panel "data table": raw values of the selected factors for the
 * selected sites, with units in the header and absent cells marked.
 */

import type { FactorDoc, TableDoc } from "./types";

export interface TableView {
  element: HTMLElement;
  render(doc: TableDoc | null, factors: Map<string, FactorDoc>): void;
}

export function createTableView(container: HTMLElement): TableView {
  const element = document.createElement("section");
  element.className = "table-view panel";
  const heading = document.createElement("h2");
  heading.textContent = "Data table";
  const body = document.createElement("div");
  body.className = "panel-body";
  element.append(heading, body);
  container.append(element);

  function render(doc: TableDoc | null, factors: Map<string, FactorDoc>): void {
    body.replaceChildren();
    if (!doc) {
      const hint = document.createElement("p");
      hint.className = "guidance";
      hint.textContent = "Select sites on the map to list their raw values.";
      body.append(hint);
      return;
    }
    const table = document.createElement("table");
    table.className = "data-table";
    const head = table.createTHead().insertRow();
    head.append(document.createElement("th"));
    (head.firstElementChild as HTMLElement).textContent = "Site";
    for (const fid of doc.factors) {
      const th = document.createElement("th");
      const factor = factors.get(fid);
      const unit = doc.units[fid];
      th.textContent = (factor?.name ?? fid) + (unit ? ` (${unit})` : "");
      head.append(th);
    }
    const tbody = table.createTBody();
    for (const row of doc.rows) {
      const tr = tbody.insertRow();
      const name = tr.insertCell();
      name.textContent = row.name;
      for (const fid of doc.factors) {
        const cell = tr.insertCell();
        const agg = row.cells[fid];
        if (!agg || agg.value === null) {
          cell.textContent = "–";
          cell.className = "cell-absent";
        } else {
          cell.textContent = String(agg.value) + (agg.partial ? " *" : "");
          if (agg.partial) cell.title = `partial: coverage ${(agg.coverage * 100).toFixed(0)}%`;
        }
      }
    }
    body.append(table);
    const note = document.createElement("p");
    note.className = "missing-note";
    note.textContent = "* aggregated from incomplete subdivisions";
    body.append(note);
  }

  return { element, render };
}

// Panel renderers. Every number written to the DOM is copied verbatim from an
// API response field; formatting keeps the exact value as text.

import type { NeighborEntry, PredictResponse } from "./types";

export const NEIGHBOR_ROW_CAP = 200;

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderNeighborPanel(
  container: HTMLElement,
  neighbors: NeighborEntry[] | null,
  error: string | null,
): void {
  container.replaceChildren();
  if (error) {
    container.appendChild(el("p", "panel-error", `Could not load neighbors: ${error}`));
    return;
  }
  if (neighbors === null) {
    container.appendChild(el("p", "panel-hint", "Drop a pin to list nearby businesses."));
    return;
  }
  if (neighbors.length === 0) {
    container.appendChild(el("p", "panel-hint", "No businesses in range of this pin."));
    return;
  }
  const table = el("table", "neighbor-table");
  const head = el("tr", "neighbor-head");
  for (const col of ["Name", "Distance (m)", "Check-ins", "Likes"]) {
    head.appendChild(el("th", "neighbor-col", col));
  }
  table.appendChild(head);
  for (const n of neighbors.slice(0, NEIGHBOR_ROW_CAP)) {
    const row = el("tr", "neighbor-row");
    row.dataset.id = n.id;
    row.appendChild(el("td", "neighbor-name", n.name));
    row.appendChild(el("td", "neighbor-distance", String(n.distance_m)));
    row.appendChild(el("td", "neighbor-checkins", String(n.checkins)));
    row.appendChild(el("td", "neighbor-likes", String(n.likes)));
    table.appendChild(row);
  }
  container.appendChild(table);
  if (neighbors.length > NEIGHBOR_ROW_CAP) {
    container.appendChild(el(
      "p", "panel-hint",
      `Showing ${NEIGHBOR_ROW_CAP} of ${neighbors.length} businesses; refine the radius to narrow the list.`,
    ));
  }
}

export function renderPredictionPanel(
  container: HTMLElement,
  prediction: PredictResponse | null,
  error: string | null,
  onRetry: () => void,
): void {
  container.replaceChildren();
  if (error) {
    container.appendChild(el("p", "panel-error", `Prediction failed: ${error}`));
    const retry = el("button", "retry-button", "Retry");
    retry.addEventListener("click", onRetry);
    container.appendChild(retry);
    return;
  }
  if (prediction === null) {
    container.appendChild(el("p", "panel-hint",
      "Pick a spot and press Calculate to score it."));
    return;
  }
  container.appendChild(el("div", "predicted-score", String(prediction.predicted_checkins)));
  container.appendChild(el("div", "predicted-label", "predicted check-ins"));
  container.appendChild(el(
    "div", "rank-line",
    `Ranked ${prediction.rank} among ${prediction.cohort_size} nearby businesses`,
  ));
  const stats = el("dl", "cohort-stats");
  const pairs: [string, number | null][] = [
    ["Lowest", prediction.cohort_min],
    ["Median", prediction.cohort_median],
    ["Highest", prediction.cohort_max],
  ];
  for (const [label, value] of pairs) {
    stats.appendChild(el("dt", "cohort-stat-label", label));
    stats.appendChild(el("dd", "cohort-stat-value",
      value === null ? "n/a" : String(value)));
  }
  container.appendChild(stats);
}

export function renderCategoryPicker(
  container: HTMLElement,
  categories: { label: string; is_food: boolean }[],
  selected: string[],
  onChange: (labels: string[]) => void,
): void {
  container.replaceChildren();
  const chosen = new Set(selected);
  for (const cat of categories) {
    const item = el("label", "category-item");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.value = cat.label;
    box.checked = chosen.has(cat.label);
    box.addEventListener("change", () => {
      if (box.checked) chosen.add(cat.label);
      else chosen.delete(cat.label);
      onChange([...chosen].sort());
    });
    item.appendChild(box);
    item.appendChild(el("span", "category-label", cat.label));
    if (cat.is_food) item.appendChild(el("span", "food-badge", "food"));
    container.appendChild(item);
  }
}

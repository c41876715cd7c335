// Wires the map, panels and state machine together over a live or mock API.

import { ApiClient } from "./api";
import type { MapAdapter } from "./map";
import { renderCategoryPicker, renderNeighborPanel, renderPredictionPanel } from "./panels";
import { AppState } from "./state";
import type { CategoryEntry } from "./types";

export interface AppElements {
  map: HTMLElement;
  neighborPanel: HTMLElement;
  predictionPanel: HTMLElement;
  categoryPicker: HTMLElement;
  calculateButton: HTMLButtonElement;
  radiusInput: HTMLInputElement;
  statusLine: HTMLElement;
}

export class App {
  readonly state: AppState;
  private categories: CategoryEntry[] = [];

  constructor(
    private api: ApiClient,
    private mapAdapter: MapAdapter,
    private ui: AppElements,
  ) {
    this.state = new AppState(api);
  }

  async start(): Promise<void> {
    this.mapAdapter.mount(this.ui.map, (latlng) => void this.state.dropPin(latlng));
    this.ui.calculateButton.addEventListener("click", () => void this.state.calculate());
    this.ui.radiusInput.addEventListener("change", () => {
      const radius = Number(this.ui.radiusInput.value);
      if (Number.isFinite(radius) && radius > 0) this.state.setRankingRadius(radius);
    });
    this.state.subscribe((snap) => this.render(snap));

    try {
      const health = await this.api.health();
      this.ui.statusLine.textContent =
        `${health.status} — ${health.dataset_size} businesses, model ${health.model_version ?? "none"}`;
    } catch (err) {
      this.ui.statusLine.textContent = "service unreachable";
    }
    try {
      this.categories = (await this.api.categories()).categories;
    } catch (err) {
      this.categories = [];
    }
    this.render(this.state.snapshot());
  }

  private render(snap: ReturnType<AppState["snapshot"]>): void {
    if (snap.pin) this.mapAdapter.setPin(snap.pin);
    this.ui.calculateButton.disabled = !snap.pin || snap.predictInFlight;
    renderNeighborPanel(this.ui.neighborPanel, snap.neighbors, snap.neighborsError);
    renderPredictionPanel(this.ui.predictionPanel, snap.lastPrediction,
      snap.predictError, () => void this.state.calculate());
    renderCategoryPicker(this.ui.categoryPicker, this.categories,
      snap.selectedCategories, (labels) => this.state.selectCategories(labels));
  }
}

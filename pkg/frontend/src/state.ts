// Single-session UI state machine. All transitions funnel through AppState so
// the guards live in one place: "Calculate" needs a pin and no request in
// flight, and a newer pin drop aborts any neighbor fetch still running.

import { ApiClient } from "./api";
import type { LatLng, NeighborEntry, PredictResponse } from "./types";

export const DEFAULT_RANKING_RADIUS_M = 500;

export interface UiSnapshot {
  pin: LatLng | null;
  selectedCategories: string[];
  rankingRadius: number;
  neighbors: NeighborEntry[] | null;
  lastPrediction: PredictResponse | null;
  predictInFlight: boolean;
  neighborsError: string | null;
  predictError: string | null;
}

export type Listener = (snapshot: UiSnapshot) => void;

export class AppState {
  private pin: LatLng | null = null;
  private selectedCategories: string[] = [];
  private rankingRadius = DEFAULT_RANKING_RADIUS_M;
  private neighbors: NeighborEntry[] | null = null;
  private lastPrediction: PredictResponse | null = null;
  private predictInFlight = false;
  private neighborsError: string | null = null;
  private predictError: string | null = null;
  private neighborFetch: AbortController | null = null;
  private listeners: Listener[] = [];

  constructor(private api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  snapshot(): UiSnapshot {
    return {
      pin: this.pin,
      selectedCategories: [...this.selectedCategories],
      rankingRadius: this.rankingRadius,
      neighbors: this.neighbors ? [...this.neighbors] : null,
      lastPrediction: this.lastPrediction,
      predictInFlight: this.predictInFlight,
      neighborsError: this.neighborsError,
      predictError: this.predictError,
    };
  }

  get calculateEnabled(): boolean {
    return this.pin !== null && !this.predictInFlight;
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const l of this.listeners) l(snap);
  }

  selectCategories(labels: string[]): void {
    this.selectedCategories = [...labels];
    this.emit();
  }

  setRankingRadius(radius: number): void {
    this.rankingRadius = radius;
    this.emit();
  }

  /** Move the pin and refresh the neighbor panel; stale fetches are aborted
   *  and a failed fetch clears the panel rather than leaving old rows up. */
  async dropPin(latlng: LatLng): Promise<void> {
    this.pin = latlng;
    this.lastPrediction = null;
    this.predictError = null;
    this.neighborFetch?.abort();
    const controller = new AbortController();
    this.neighborFetch = controller;
    this.emit();
    try {
      const res = await this.api.neighbors(
        latlng.lat,
        latlng.lng,
        this.rankingRadius,
        controller.signal,
      );
      if (controller.signal.aborted) return;
      this.neighbors = res.neighbors;
      this.neighborsError = null;
    } catch (err) {
      if (controller.signal.aborted) return;
      this.neighbors = null;
      this.neighborsError = err instanceof Error ? err.message : String(err);
    }
    this.emit();
  }

  /** POST /predict for the current pin; no-op while a request is in flight. */
  async calculate(): Promise<void> {
    if (!this.calculateEnabled || this.pin === null) return;
    this.predictInFlight = true;
    this.predictError = null;
    this.emit();
    try {
      this.lastPrediction = await this.api.predict({
        latitude: this.pin.lat,
        longitude: this.pin.lng,
        categories: this.selectedCategories,
        radius: this.rankingRadius,
      });
    } catch (err) {
      this.lastPrediction = null;
      this.predictError = err instanceof Error ? err.message : String(err);
    }
    this.predictInFlight = false;
    this.emit();
  }
}

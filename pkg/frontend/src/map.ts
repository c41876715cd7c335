// Map rendering sits behind a small adapter so any slippy-map provider can be
// swapped in without touching application logic, and tests can use a stub.

import type { LatLng } from "./types";

export interface MapAdapter {
  /** Mount into a container and report clicks as coordinates. */
  mount(container: HTMLElement, onClick: (latlng: LatLng) => void): void;
  /** Render (or move) the single user pin. */
  setPin(latlng: LatLng): void;
  /** Render existing businesses as markers. */
  setBusinessMarkers(points: { latlng: LatLng; label: string }[]): void;
}

export interface Viewport {
  center: LatLng;
  /** Degrees of longitude spanned by the canvas width. */
  spanLng: number;
}

/**
 * Offline canvas adapter: an equirectangular plot of the city with no tile
 * provider or API key. Good enough to click around a dataset; a tile-based
 * adapter can replace it by implementing MapAdapter.
 */
export class CanvasMapAdapter implements MapAdapter {
  private canvas: HTMLCanvasElement | null = null;
  private pin: LatLng | null = null;
  private markers: { latlng: LatLng; label: string }[] = [];

  constructor(private viewport: Viewport) {}

  mount(container: HTMLElement, onClick: (latlng: LatLng) => void): void {
    const canvas = document.createElement("canvas");
    canvas.width = 640;
    canvas.height = 640;
    canvas.className = "map-canvas";
    canvas.addEventListener("click", (ev) => {
      const rect = canvas.getBoundingClientRect();
      const x = ev.clientX - rect.left;
      const y = ev.clientY - rect.top;
      onClick(this.unproject(x, y));
    });
    container.appendChild(canvas);
    this.canvas = canvas;
    this.draw();
  }

  setPin(latlng: LatLng): void {
    this.pin = latlng;
    this.draw();
  }

  setBusinessMarkers(points: { latlng: LatLng; label: string }[]): void {
    this.markers = points;
    this.draw();
  }

  private project(latlng: LatLng): { x: number; y: number } {
    if (!this.canvas) return { x: 0, y: 0 };
    const { center, spanLng } = this.viewport;
    const spanLat = (spanLng * this.canvas.height) / this.canvas.width;
    const x = ((latlng.lng - center.lng) / spanLng + 0.5) * this.canvas.width;
    const y = ((center.lat - latlng.lat) / spanLat + 0.5) * this.canvas.height;
    return { x, y };
  }

  private unproject(x: number, y: number): LatLng {
    const { center, spanLng } = this.viewport;
    const canvas = this.canvas!;
    const spanLat = (spanLng * canvas.height) / canvas.width;
    return {
      lat: center.lat - (y / canvas.height - 0.5) * spanLat,
      lng: center.lng + (x / canvas.width - 0.5) * spanLng,
    };
  }

  private draw(): void {
    const ctx = this.canvas?.getContext("2d");
    if (!ctx || !this.canvas) return;
    ctx.fillStyle = "#eef3ee";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.fillStyle = "#c0392b";
    for (const m of this.markers) {
      const { x, y } = this.project(m.latlng);
      ctx.beginPath();
      ctx.arc(x, y, 3, 0, 2 * Math.PI);
      ctx.fill();
    }
    if (this.pin) {
      const { x, y } = this.project(this.pin);
      ctx.fillStyle = "#2460a7";
      ctx.beginPath();
      ctx.arc(x, y, 6, 0, 2 * Math.PI);
      ctx.fill();
      ctx.strokeStyle = "#ffffff";
      ctx.stroke();
    }
  }
}

import { ApiClient } from "./api";
import { App, AppElements } from "./app";
import { CanvasMapAdapter } from "./map";

// Single configuration point: the service base URL (?api=... overrides).
const params = new URLSearchParams(window.location.search);
const BASE_URL = params.get("api") ?? "http://127.0.0.1:8080";

const ui: AppElements = {
  map: document.getElementById("map")!,
  neighborPanel: document.getElementById("neighbor-panel")!,
  predictionPanel: document.getElementById("prediction-panel")!,
  categoryPicker: document.getElementById("category-picker")!,
  calculateButton: document.getElementById("calculate") as HTMLButtonElement,
  radiusInput: document.getElementById("radius") as HTMLInputElement,
  statusLine: document.getElementById("status")!,
};

const map = new CanvasMapAdapter({
  center: { lat: 1.2875, lng: 103.8475 },
  spanLng: 0.02,
});

const app = new App(new ApiClient(BASE_URL), map, ui);
void app.start();

// Snapshot discipline: no number rendered anywhere may differ from its API
// fixture source. Panels are rendered straight from fixtures and every
// numeric string found in the DOM must trace back to a fixture field.

import { describe, expect, it } from "vitest";

import { renderNeighborPanel, renderPredictionPanel } from "../src/panels";
import { neighborsFixture, predictFixture } from "./fixtures";

function numbersIn(text: string): string[] {
  return text.match(/-?\d+(?:\.\d+)?/g) ?? [];
}

describe("neighbor panel snapshot", () => {
  it("matches the recorded rendering", () => {
    const host = document.createElement("div");
    renderNeighborPanel(host, neighborsFixture.neighbors, null);
    expect(host.innerHTML).toMatchSnapshot();
  });

  it("every displayed number is a fixture field", () => {
    const host = document.createElement("div");
    renderNeighborPanel(host, neighborsFixture.neighbors, null);
    const allowed = new Set<string>();
    for (const n of neighborsFixture.neighbors) {
      allowed.add(String(n.distance_m));
      allowed.add(String(n.checkins));
      allowed.add(String(n.likes));
      for (const part of numbersIn(n.name)) allowed.add(part);
    }
    for (const cell of host.querySelectorAll("td")) {
      for (const num of numbersIn(cell.textContent ?? "")) {
        expect(allowed.has(num), `unexpected number ${num}`).toBe(true);
      }
    }
  });
});

describe("prediction panel snapshot", () => {
  it("matches the recorded rendering", () => {
    const host = document.createElement("div");
    renderPredictionPanel(host, predictFixture, null, () => {});
    expect(host.innerHTML).toMatchSnapshot();
  });

  it("every displayed number is a fixture field", () => {
    const host = document.createElement("div");
    renderPredictionPanel(host, predictFixture, null, () => {});
    const allowed = new Set([
      String(predictFixture.predicted_checkins),
      String(predictFixture.rank),
      String(predictFixture.cohort_size),
      String(predictFixture.cohort_min),
      String(predictFixture.cohort_max),
      String(predictFixture.cohort_median),
    ]);
    for (const num of numbersIn(host.textContent ?? "")) {
      expect(allowed.has(num), `unexpected number ${num}`).toBe(true);
    }
  });
});

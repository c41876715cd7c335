// Recorded API payloads the mock server replays. The prediction fixture is
// internally consistent: rank 3 = 1 + two cohort members above 412.37.

import type {
  CategoriesResponse,
  HealthResponse,
  NeighborsResponse,
  PredictResponse,
} from "../src/types";

export const healthFixture: HealthResponse = {
  status: "ready",
  dataset_size: 150,
  model_version: "abc123def456",
};

export const categoriesFixture: CategoriesResponse = {
  categories: [
    { label: "bar", is_food: true },
    { label: "bookstore", is_food: false },
    { label: "cafe", is_food: true },
    { label: "coffee shop", is_food: true },
    { label: "train station", is_food: false },
  ],
};

export const neighborsFixture: NeighborsResponse = {
  neighbors: [
    { id: "b1", name: "Kopi Corner", distance_m: 42.3, checkins: 1520, likes: 310 },
    { id: "b2", name: "Mee Pok Place", distance_m: 87.9, checkins: 640, likes: 123 },
    { id: "b3", name: "Harbour Books", distance_m: 203.4, checkins: 95, likes: 888 },
  ],
};

export const predictFixture: PredictResponse = {
  predicted_checkins: 412.37,
  rank: 3,
  cohort_size: 3,
  cohort_min: 95,
  cohort_max: 1520,
  cohort_median: 640,
  neighbors: neighborsFixture.neighbors,
};

export const emptyPredictFixture: PredictResponse = {
  predicted_checkins: 12.9,
  rank: 1,
  cohort_size: 0,
  cohort_min: null,
  cohort_max: null,
  cohort_median: null,
  neighbors: [],
};

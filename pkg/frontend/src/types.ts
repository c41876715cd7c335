// Wire format of the prediction service. Every field shown in the UI comes
// verbatim from these shapes; the client never derives its own numbers.

export interface HealthResponse {
  status: string;
  dataset_size: number;
  model_version: string | null;
}

export interface CategoryEntry {
  label: string;
  is_food: boolean;
}

export interface CategoriesResponse {
  categories: CategoryEntry[];
}

export interface NeighborEntry {
  id: string;
  name: string;
  distance_m: number;
  checkins: number;
  likes: number;
}

export interface NeighborsResponse {
  neighbors: NeighborEntry[];
}

export interface PredictRequest {
  latitude: number;
  longitude: number;
  categories: string[];
  radius: number;
}

export interface PredictResponse {
  predicted_checkins: number;
  rank: number;
  cohort_size: number;
  cohort_min: number | null;
  cohort_max: number | null;
  cohort_median: number | null;
  neighbors: NeighborEntry[];
}

export interface LatLng {
  lat: number;
  lng: number;
}

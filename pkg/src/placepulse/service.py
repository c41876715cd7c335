"""HTTP API for on-the-fly prediction, neighbor listing, and ranking.

Four endpoints back the map UI:

  GET  /health      -> {"status", "dataset_size", "model_version"}
  GET  /categories  -> {"categories": [{"label", "is_food"}]}
  GET  /neighbors   -> {"neighbors": [{"id", "name", "distance_m", "checkins", "likes"}]}
  POST /predict     -> predicted check-ins plus rank and cohort statistics

Everything is loaded once and shared read-only; no request mutates state.
Handlers are plain functions over ServiceState so they can be exercised
without a server; the FastAPI app is a thin shell around them.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .core import ChunkMask, Dataset, GeoPoint
from .features import FeatureConfig, apply_mask, extract_features
from .gbm import GbmModel
from .geo import SpatialIndex, build_index, radius_query

DEFAULT_RANKING_RADIUS_M = 500.0
MAX_RADIUS_M = 1000.0


class ApiError(Exception):
    def __init__(self, status: int, reason: str):
        super().__init__(reason)
        self.status = status
        self.reason = reason


@dataclass
class ServiceState:
    dataset: Optional[Dataset] = None
    index: Optional[SpatialIndex] = None
    model: Optional[GbmModel] = None
    feature_cfg: Optional[FeatureConfig] = None
    mask: ChunkMask = ChunkMask.full()
    model_version: Optional[str] = None

    @property
    def ready(self) -> bool:
        return self.model is not None and self.index is not None


def make_state(dataset: Dataset, model: Optional[GbmModel],
               mask: Optional[ChunkMask] = None) -> ServiceState:
    mask = mask or ChunkMask.full()
    fcfg = FeatureConfig(vocabulary=dataset.vocabulary)
    if model is not None:
        from .features import mask_columns
        expected = len(mask_columns(mask, len(dataset.vocabulary)))
        if model.feature_count != expected:
            raise ValueError(
                f"model expects {model.feature_count} features but mask "
                f"{mask.to_string()} over this vocabulary yields {expected}")
    return ServiceState(
        dataset=dataset,
        index=build_index(dataset.profiles, MAX_RADIUS_M),
        model=model,
        feature_cfg=fcfg,
        mask=mask,
        model_version=model.digest()[:12] if model is not None else None,
    )


def _require_ready(state: ServiceState) -> None:
    if not state.ready:
        raise ApiError(503, "model not loaded")


def _validated_point(lat, lng) -> GeoPoint:
    try:
        point = GeoPoint(float(lat), float(lng))
    except (TypeError, ValueError):
        raise ApiError(400, "latitude and longitude must be numbers")
    if not point.is_valid:
        raise ApiError(400, "coordinates out of range")
    return point


def _validated_radius(radius) -> float:
    try:
        r = float(radius)
    except (TypeError, ValueError):
        raise ApiError(400, "radius must be a number")
    if not 0 < r <= MAX_RADIUS_M:
        raise ApiError(400, f"radius must be in (0, {MAX_RADIUS_M:.0f}]")
    return r


def handle_health(state: ServiceState) -> tuple[dict, int]:
    body = {
        "status": "ready" if state.ready else "loading",
        "dataset_size": len(state.dataset) if state.dataset else 0,
        "model_version": state.model_version,
    }
    return body, (200 if state.ready else 503)


def handle_categories(state: ServiceState) -> dict:
    _require_ready(state)
    food = state.dataset.food_list
    return {"categories": [{"label": label, "is_food": label in food.labels}
                           for label in state.dataset.vocabulary.labels]}


def _neighbor_entries(state: ServiceState, center: GeoPoint, radius: float) -> list[dict]:
    # Same ordering contract as radius_query (distance, then id), built straight
    # from the index arrays; cohorts run to thousands of rows in dense blocks.
    idx = state.index
    rows, dist = idx.gather(center, radius)
    if rows.size == 0:
        return []
    order = np.lexsort((idx._ids_arr[rows], dist))
    rows, dist = rows[order], dist[order]
    checkins = idx.checkins[rows].tolist()
    likes = idx.likes[rows].tolist()
    distances = dist.tolist()
    profiles = idx.profiles
    return [{
        "id": profiles[r].id,
        "name": profiles[r].name,
        "distance_m": distances[i],
        "checkins": checkins[i],
        "likes": likes[i],
    } for i, r in enumerate(rows.tolist())]


def handle_neighbors(state: ServiceState, lat, lng, radius) -> dict:
    _require_ready(state)
    center = _validated_point(lat, lng)
    r = _validated_radius(radius)
    return {"neighbors": _neighbor_entries(state, center, r)}


def cohort_rank(predicted: float, cohort_checkins) -> int:
    """1-based rank of a prediction among actual counts; ties never outrank."""
    return 1 + sum(1 for c in cohort_checkins if c > predicted)


def handle_predict(state: ServiceState, body) -> dict:
    """Score a pin: extract features (no exclusion, the point is hypothetical),
    invert the log-space prediction, and rank it against the cohort of
    businesses within the ranking radius. A cohort business outranks the pin
    only when its actual check-ins are strictly greater."""
    _require_ready(state)
    if not isinstance(body, dict):
        raise ApiError(400, "body must be a JSON object")
    if "latitude" not in body or "longitude" not in body:
        raise ApiError(400, "latitude and longitude are required")
    center = _validated_point(body["latitude"], body["longitude"])
    radius = _validated_radius(body.get("radius", DEFAULT_RANKING_RADIUS_M))
    categories = body.get("categories", [])
    if not isinstance(categories, list) or not all(isinstance(c, str) for c in categories):
        raise ApiError(400, "categories must be a list of labels")
    for label in categories:
        if label not in state.feature_cfg.vocabulary:
            raise ApiError(400, f"unknown category label: {label!r}")

    fv = extract_features(center, categories, state.index, state.feature_cfg)
    score = state.model.predict_one(apply_mask(fv, state.mask))
    predicted = max(0.0, float(np.expm1(score)))

    neighbors = _neighbor_entries(state, center, radius)
    cohort = [n["checkins"] for n in neighbors]
    rank = cohort_rank(predicted, cohort)
    return {
        "predicted_checkins": predicted,
        "rank": rank,
        "cohort_size": len(cohort),
        "cohort_min": min(cohort) if cohort else None,
        "cohort_max": max(cohort) if cohort else None,
        "cohort_median": statistics.median(cohort) if cohort else None,
        "neighbors": neighbors,
    }


def create_app(state: ServiceState, cors_origin: str = "*") -> FastAPI:
    """Wrap a ServiceState in the FastAPI shell implementing the wire format."""
    app = FastAPI(title="placepulse", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=[cors_origin],
                       allow_methods=["*"], allow_headers=["*"])
    app.state.service = state

    def _error(exc: ApiError) -> JSONResponse:
        return JSONResponse({"error": exc.reason}, status_code=exc.status)

    @app.get("/health")
    async def health():
        body, status = handle_health(state)
        return JSONResponse(body, status_code=status)

    @app.get("/categories")
    async def categories():
        try:
            return JSONResponse(handle_categories(state))
        except ApiError as exc:
            return _error(exc)

    @app.get("/neighbors")
    async def neighbors(request: Request):
        params = request.query_params
        try:
            if not all(k in params for k in ("lat", "lng", "radius")):
                raise ApiError(400, "lat, lng and radius are required")
            return JSONResponse(handle_neighbors(
                state, params["lat"], params["lng"], params["radius"]))
        except ApiError as exc:
            return _error(exc)

    @app.post("/predict")
    async def predict(request: Request):
        try:
            try:
                body = await request.json()
            except Exception:
                raise ApiError(400, "invalid JSON body")
            return JSONResponse(handle_predict(state, body))
        except ApiError as exc:
            return _error(exc)

    return app

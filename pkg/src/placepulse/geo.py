"""Haversine distance and a radius-query grid index over place profiles.

The index replaces an n x n distance matrix with a uniform lat/lon grid whose
cell size covers the maximum query radius, so a 3x3 block of cells always
contains every candidate. Queries are exact: candidates are re-checked with
the haversine distance. Longitude wrap-around is not handled (city-scale
assumption; documented limitation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import GeoPoint, PlaceProfile

# IUGG mean earth radius, meters. Fixed so results are bit-comparable.
EARTH_RADIUS_M = 6_371_008.8


def haversine(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters on a sphere of radius EARTH_RADIUS_M."""
    lat1, lon1 = math.radians(a.latitude), math.radians(a.longitude)
    lat2, lon2 = math.radians(b.latitude), math.radians(b.longitude)
    sdlat = math.sin((lat2 - lat1) / 2.0)
    sdlon = math.sin((lon2 - lon1) / 2.0)
    h = sdlat * sdlat + math.cos(lat1) * math.cos(lat2) * sdlon * sdlon
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def _haversine_many(lat_rad: np.ndarray, lon_rad: np.ndarray,
                    clat: float, clon: float) -> np.ndarray:
    """Vectorized haversine from one center (radians) to many points (radians)."""
    sdlat = np.sin((lat_rad - clat) / 2.0)
    sdlon = np.sin((lon_rad - clon) / 2.0)
    h = sdlat * sdlat + math.cos(clat) * np.cos(lat_rad) * sdlon * sdlon
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.minimum(1.0, np.sqrt(h)))


@dataclass(frozen=True)
class NeighborHit:
    profile: PlaceProfile
    distance: float


class SpatialIndex:
    """Build-once, immutable grid index answering radius and kNN queries.

    Besides profile objects it keeps parallel numpy arrays (coordinates,
    check-ins, likes, food flags) so feature extraction can aggregate
    neighborhoods without touching Python objects per hit.
    """

    def __init__(self, profiles: Sequence[PlaceProfile], max_radius: float):
        if max_radius <= 0:
            raise ValueError("max_radius must be positive")
        self.max_radius = float(max_radius)
        self.profiles: list[PlaceProfile] = list(profiles)
        n = len(self.profiles)

        lat = np.array([p.location.latitude for p in self.profiles], dtype=np.float64)
        lon = np.array([p.location.longitude for p in self.profiles], dtype=np.float64)
        self.lat_rad = np.radians(lat)
        self.lon_rad = np.radians(lon)
        self.checkins = np.array([p.checkins for p in self.profiles], dtype=np.int64)
        self.likes = np.array([p.likes for p in self.profiles], dtype=np.int64)
        self.is_food = np.array([p.is_food for p in self.profiles], dtype=bool)
        self.ids = [p.id for p in self.profiles]
        self._ids_arr = np.array(self.ids, dtype=np.str_) if n else np.empty(0, dtype=np.str_)
        self._id_to_row = {pid: i for i, pid in enumerate(self.ids)}

        # Cell sizes: one cell must cover max_radius on each axis so a 3x3
        # block around the query cell bounds every candidate. The longitude
        # step shrinks with cos(lat); use the worst case over the data.
        meters_per_deg_lat = math.pi * EARTH_RADIUS_M / 180.0
        self._cell_lat = self.max_radius / meters_per_deg_lat
        max_abs_lat = float(np.max(np.abs(lat))) if n else 0.0
        cos_floor = max(math.cos(math.radians(min(max_abs_lat + 1.0, 89.0))), 1e-3)
        self._cell_lon = self.max_radius / (meters_per_deg_lat * cos_floor)

        cells: dict[tuple[int, int], list[int]] = {}
        for i in range(n):
            cells.setdefault(self._cell_of(lat[i], lon[i]), []).append(i)
        self._cells = {k: np.array(v, dtype=np.int64) for k, v in cells.items()}

    def __len__(self) -> int:
        return len(self.profiles)

    def _cell_of(self, lat_deg: float, lon_deg: float) -> tuple[int, int]:
        return (int(math.floor(lat_deg / self._cell_lat)),
                int(math.floor(lon_deg / self._cell_lon)))

    def _candidates(self, center: GeoPoint) -> np.ndarray:
        ci, cj = self._cell_of(center.latitude, center.longitude)
        blocks = [self._cells[(i, j)]
                  for i in (ci - 1, ci, ci + 1)
                  for j in (cj - 1, cj, cj + 1)
                  if (i, j) in self._cells]
        if not blocks:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(blocks)

    def gather(self, center: GeoPoint, radius: float,
               exclude_id: Optional[str] = None) -> tuple[np.ndarray, np.ndarray]:
        """Rows and haversine distances of every profile within radius meters.

        The raw-array workhorse behind radius_query and the feature extractor;
        output order is arbitrary.
        """
        if not 0 < radius <= self.max_radius:
            raise ValueError(f"radius must be in (0, {self.max_radius}], got {radius}")
        cand = self._candidates(center)
        if cand.size == 0:
            return cand, np.empty(0, dtype=np.float64)
        clat, clon = math.radians(center.latitude), math.radians(center.longitude)
        dist = _haversine_many(self.lat_rad[cand], self.lon_rad[cand], clat, clon)
        keep = dist <= radius
        rows, dist = cand[keep], dist[keep]
        if exclude_id is not None and exclude_id in self._id_to_row:
            not_self = rows != self._id_to_row[exclude_id]
            rows, dist = rows[not_self], dist[not_self]
        return rows, dist

    def row_of(self, profile_id: str) -> Optional[int]:
        return self._id_to_row.get(profile_id)


def build_index(profiles: Sequence[PlaceProfile], max_radius: float = 1000.0) -> SpatialIndex:
    return SpatialIndex(profiles, max_radius)


def _sorted_hits(idx: SpatialIndex, rows: np.ndarray, dist: np.ndarray) -> list[NeighborHit]:
    if rows.size == 0:
        return []
    order = np.lexsort((idx._ids_arr[rows], dist))
    return [NeighborHit(idx.profiles[rows[k]], float(dist[k])) for k in order]


def radius_query(idx: SpatialIndex, center: GeoPoint, radius: float,
                 exclude_id: Optional[str] = None) -> list[NeighborHit]:
    """All profiles with haversine <= radius, nearest first; ties broken by id."""
    rows, dist = idx.gather(center, radius, exclude_id)
    return _sorted_hits(idx, rows, dist)


def knn(idx: SpatialIndex, center: GeoPoint, k: int,
        exclude_id: Optional[str] = None) -> list[NeighborHit]:
    """The k nearest profiles (fewer if the dataset is smaller), nearest first.

    The k-th neighbor may lie beyond the grid's guaranteed radius, so this
    scans all points with one vectorized distance pass; exact at any k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rows = np.arange(len(idx), dtype=np.int64)
    if exclude_id is not None and idx.row_of(exclude_id) is not None:
        rows = rows[rows != idx.row_of(exclude_id)]
    if rows.size == 0:
        return []
    clat, clon = math.radians(center.latitude), math.radians(center.longitude)
    dist = _haversine_many(idx.lat_rad[rows], idx.lon_rad[rows], clat, clon)
    return _sorted_hits(idx, rows, dist)[:k]

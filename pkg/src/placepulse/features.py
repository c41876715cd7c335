"""Six-chunk feature vectors for any map point, existing business or not.

Layout (Table-style, concatenated in order):
  chunk 1: binary own-category indicators            (V)
  chunk 2: category counts of food neighbors <= r_c  (V)
  chunk 3: ln(1 + total food check-ins)   per radius (20)
  chunk 4: ln(1 + average food check-ins) per radius (20)
  chunk 5: ln(1 + total check-ins, all)   per radius (20)
  chunk 6: ln(1 + average check-ins, all) per radius (20)

Hotspots are cumulative (nested) circles on the fixed 50..1000 m ladder.
The target's own check-ins never contribute: pass exclude_id for existing
profiles, leave it unset for hypothetical points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import (
    CategoryVocabulary,
    ChunkMask,
    FeatureVector,
    GeoPoint,
    HotspotRadii,
    PlaceProfile,
)
from .geo import SpatialIndex


@dataclass(frozen=True)
class FeatureConfig:
    vocabulary: CategoryVocabulary
    category_neighbor_radius: float = 200.0
    radii: HotspotRadii = field(default_factory=HotspotRadii)

    def __post_init__(self):
        if not 0 < self.category_neighbor_radius <= 1000:
            raise ValueError("category_neighbor_radius must be in (0, 1000]")

    @property
    def total_features(self) -> int:
        return 2 * len(self.vocabulary) + 4 * len(self.radii)


def encode_target_categories(categories: Iterable[str],
                             vocab: CategoryVocabulary) -> np.ndarray:
    """Chunk 1: one-vs-all binary encoding of the point's own labels."""
    vec = np.zeros(len(vocab), dtype=np.int64)
    for label in categories:
        vec[vocab.index_of(label)] = 1
    return vec


def neighbor_category_counts(idx: SpatialIndex, center: GeoPoint,
                             cfg: FeatureConfig,
                             exclude_id: Optional[str] = None) -> np.ndarray:
    """Chunk 2: summed category indicator vectors of nearby food businesses.

    A neighbor carrying m labels contributes to m elements.
    """
    rows, _ = idx.gather(center, cfg.category_neighbor_radius, exclude_id)
    counts = np.zeros(len(cfg.vocabulary), dtype=np.int64)
    for row in rows:
        if not idx.is_food[row]:
            continue
        for label in idx.profiles[row].categories:
            counts[cfg.vocabulary.index_of(label)] += 1
    return counts


def _hotspot_from_arrays(dist: np.ndarray, checkins: np.ndarray,
                         radii: Sequence[int], mode: str) -> np.ndarray:
    """Aggregate (distance, check-ins) pairs over the cumulative radius ladder."""
    if mode not in ("total", "average"):
        raise ValueError(f"mode must be 'total' or 'average', got {mode!r}")
    order = np.argsort(dist, kind="stable")
    d_sorted = dist[order]
    c_sorted = checkins[order].astype(np.int64)
    csum = np.cumsum(c_sorted)
    out = np.zeros(len(radii), dtype=np.float64)
    for i, r in enumerate(radii):
        k = int(np.searchsorted(d_sorted, r, side="right"))
        total = int(csum[k - 1]) if k > 0 else 0
        if mode == "total":
            out[i] = math.log1p(total)
        else:
            out[i] = math.log1p(total / max(1, k))
    return out


def hotspot_profile(idx: SpatialIndex, center: GeoPoint, radii: HotspotRadii,
                    food_only: bool, mode: str,
                    exclude_id: Optional[str] = None) -> np.ndarray:
    """Chunks 3-6: log total or log average check-ins per nested circle."""
    rows, dist = idx.gather(center, max(radii.radii), exclude_id)
    if food_only:
        keep = idx.is_food[rows]
        rows, dist = rows[keep], dist[keep]
    return _hotspot_from_arrays(dist, idx.checkins[rows], radii.radii, mode)


def extract_features(center: GeoPoint, categories: Iterable[str],
                     idx: SpatialIndex, cfg: FeatureConfig,
                     exclude_id: Optional[str] = None) -> FeatureVector:
    """Build the full six-chunk vector for a point.

    One spatial gather at the ladder maximum feeds all four hotspot chunks and
    the category-count chunk, so extraction stays cheap enough to run per
    request in the prediction service.
    """
    c1 = encode_target_categories(categories, cfg.vocabulary)

    rows, dist = idx.gather(center, max(cfg.radii.radii), exclude_id)
    food = idx.is_food[rows]
    checkins = idx.checkins[rows]

    c2 = np.zeros(len(cfg.vocabulary), dtype=np.int64)
    near = dist <= cfg.category_neighbor_radius
    for row in rows[near & food]:
        for label in idx.profiles[row].categories:
            c2[cfg.vocabulary.index_of(label)] += 1

    ladder = cfg.radii.radii
    c3 = _hotspot_from_arrays(dist[food], checkins[food], ladder, "total")
    c4 = _hotspot_from_arrays(dist[food], checkins[food], ladder, "average")
    c5 = _hotspot_from_arrays(dist, checkins, ladder, "total")
    c6 = _hotspot_from_arrays(dist, checkins, ladder, "average")
    return FeatureVector(c1=c1, c2=c2, c3=c3, c4=c4, c5=c5, c6=c6)


def apply_mask(fv: FeatureVector, mask: ChunkMask) -> np.ndarray:
    """Concatenate only the selected chunks, order preserved."""
    if not mask.any_selected:
        raise ValueError("mask selects no chunks")
    parts = [np.asarray(chunk, dtype=np.float64)
             for chunk, selected in zip(fv.chunks(), mask.flags) if selected]
    return np.concatenate(parts)


def chunk_sizes(vocab_size: int) -> tuple[int, ...]:
    return (vocab_size, vocab_size, 20, 20, 20, 20)


def mask_columns(mask: ChunkMask, vocab_size: int) -> np.ndarray:
    """Column indices of the selected chunks within the full feature matrix."""
    if not mask.any_selected:
        raise ValueError("mask selects no chunks")
    sizes = chunk_sizes(vocab_size)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    cols = [np.arange(offsets[i], offsets[i + 1])
            for i, selected in enumerate(mask.flags) if selected]
    return np.concatenate(cols).astype(np.int64)


def feature_names(cfg: FeatureConfig) -> list[str]:
    """Flat column names: c1_<label>.., c2_<label>.., c3_50..c6_1000."""
    names = [f"c1_{label}" for label in cfg.vocabulary.labels]
    names += [f"c2_{label}" for label in cfg.vocabulary.labels]
    for chunk in (3, 4, 5, 6):
        names += [f"c{chunk}_{r}" for r in cfg.radii.radii]
    return names


def build_feature_matrix(profiles: Sequence[PlaceProfile], idx: SpatialIndex,
                         cfg: FeatureConfig, exclude_self: bool = True) -> np.ndarray:
    """Stack full feature vectors for many profiles; rows align with input order."""
    X = np.empty((len(profiles), cfg.total_features), dtype=np.float64)
    for i, p in enumerate(profiles):
        fv = extract_features(p.location, p.categories, idx, cfg,
                              exclude_id=p.id if exclude_self else None)
        X[i] = fv.concat()
    return X


def export_feature_matrix(path, profiles: Sequence[PlaceProfile],
                          idx: SpatialIndex, cfg: FeatureConfig,
                          exclude_self: bool = True) -> None:
    """CSV export: feature columns plus the raw check-in target."""
    X = build_feature_matrix(profiles, idx, cfg, exclude_self=exclude_self)
    names = feature_names(cfg) + ["target_checkins"]
    y = np.array([[p.checkins] for p in profiles], dtype=np.float64)
    data = np.hstack([X, y])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        for row in data:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")

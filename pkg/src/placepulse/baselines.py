"""Reference predictors that anchor the evaluation of the boosted model."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import GeoPoint
from .geo import SpatialIndex


@dataclass(frozen=True)
class DnnConfig:
    """Distance-based nearest-neighbors predictor settings.

    fallback is the training-set median check-in count, returned when the
    query point has no neighbors inside the radius.
    """

    radius: float = 100.0
    fallback: float = 0.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")


def dnn_predict(idx: SpatialIndex, center: GeoPoint, cfg: DnnConfig,
                exclude_id: Optional[str] = None) -> float:
    """Invert the mean log score of neighbors within the radius.

    exp(mean(ln(1+c))) - 1 over neighbor check-ins c; the popularity of the
    surroundings stands in for the popularity of the point.
    """
    rows, _ = idx.gather(center, cfg.radius, exclude_id)
    if rows.size == 0:
        return float(cfg.fallback)
    mean_log = float(np.mean(np.log1p(idx.checkins[rows].astype(np.float64))))
    return math.expm1(mean_log)


def mean_predict(targets: Sequence[float]) -> float:
    """Constant predictor: the log-mean check-in count of the training set."""
    targets = np.asarray(targets, dtype=np.float64)
    if targets.size == 0:
        raise ValueError("targets must be non-empty")
    return math.expm1(float(np.mean(np.log1p(targets))))

"""Metrics, cross-validation, correlation analysis, significance testing,
and the 63-variant chunk-mask sweep.

All scoring happens on the raw check-in scale with logarithmic error metrics,
so models that train in log space and baselines that never leave count space
are directly comparable. Cross-validation rebuilds the spatial index from
training profiles only, so no validation check-in can leak into any feature.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .baselines import DnnConfig, dnn_predict, mean_predict
from .core import ChunkMask, Dataset, GeoPoint, HotspotRadii, PlaceProfile
from .features import FeatureConfig, build_feature_matrix, mask_columns
from .gbm import GbmConfig, fit as gbm_fit
from .geo import SpatialIndex, build_index

PCC_RADII_M = tuple(range(50, 501, 50))


def _check_metric_inputs(preds, actuals) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(preds, dtype=np.float64)
    a = np.asarray(actuals, dtype=np.float64)
    if p.shape != a.shape or p.ndim != 1 or p.size < 1:
        raise ValueError("preds and actuals must be equal-length 1-D, length >= 1")
    if not (np.isfinite(p).all() and np.isfinite(a).all()):
        raise ValueError("metric inputs must be finite")
    if (p < 0).any() or (a < 0).any():
        raise ValueError("metric inputs must be non-negative")
    return p, a


def msle(preds, actuals) -> float:
    """Mean squared difference of ln(x+1) between predictions and actuals."""
    p, a = _check_metric_inputs(preds, actuals)
    return float(np.mean((np.log1p(p) - np.log1p(a)) ** 2))


def male(preds, actuals) -> float:
    """Mean absolute difference of ln(x+1) between predictions and actuals."""
    p, a = _check_metric_inputs(preds, actuals)
    return float(np.mean(np.abs(np.log1p(p) - np.log1p(a))))


@dataclass(frozen=True)
class FoldPlan:
    k: int
    seed: int
    assignment: dict[str, int]

    def fold_ids(self, fold: int) -> set[str]:
        return {pid for pid, f in self.assignment.items() if f == fold}


def make_folds(ids: Sequence[str], k: int = 10, seed: int = 0) -> FoldPlan:
    """Seeded uniform shuffle, then round-robin assignment to k folds."""
    ids = list(ids)
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(ids) < k:
        raise ValueError(f"need at least {k} ids for {k} folds")
    if len(set(ids)) != len(ids):
        raise ValueError("ids must be unique")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(ids))
    assignment = {ids[j]: i % k for i, j in enumerate(order)}
    return FoldPlan(k=k, seed=seed, assignment=assignment)


@dataclass
class EvaluationReport:
    model: str
    mask: Optional[ChunkMask]
    fold_male: list[float]
    fold_msle: list[float]

    @property
    def mean_male(self) -> float:
        return float(np.mean(self.fold_male))

    @property
    def mean_msle(self) -> float:
        return float(np.mean(self.fold_msle))

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "mask": self.mask.to_string() if self.mask else None,
            "folds": [{"male": m, "msle": s}
                      for m, s in zip(self.fold_male, self.fold_msle)],
            "mean_male": self.mean_male,
            "mean_msle": self.mean_msle,
        }


def _split_fold(dataset: Dataset, plan: FoldPlan,
                fold: int) -> tuple[list[PlaceProfile], list[PlaceProfile]]:
    train = [p for p in dataset.profiles if plan.assignment[p.id] != fold]
    val = [p for p in dataset.profiles if plan.assignment[p.id] == fold]
    return train, val


def _gbm_fold_scores(train, val, mask: ChunkMask, cfg: GbmConfig,
                     fcfg: FeatureConfig) -> tuple[float, float]:
    idx = build_index(train, max(fcfg.radii.radii))
    cols = mask_columns(mask, len(fcfg.vocabulary))
    Xtr = build_feature_matrix(train, idx, fcfg, exclude_self=True)[:, cols]
    ytr = np.log1p(np.array([p.checkins for p in train], dtype=np.float64))
    Xva = build_feature_matrix(val, idx, fcfg, exclude_self=False)[:, cols]
    model = gbm_fit(Xtr, ytr, cfg)
    preds = np.maximum(np.expm1(model.predict_many(Xva)), 0.0)
    actual = np.array([p.checkins for p in val], dtype=np.float64)
    return male(preds, actual), msle(preds, actual)


def cross_validate(dataset: Dataset, mask: Optional[ChunkMask], family: str,
                   cfg=None, plan: Optional[FoldPlan] = None,
                   feature_cfg: Optional[FeatureConfig] = None) -> EvaluationReport:
    """k-fold evaluation of one model family on the raw check-in scale.

    Each fold rebuilds the spatial index over its training profiles only and
    extracts features for both sides against that index; training points
    exclude themselves, validation points are treated as hypothetical.
    """
    if family not in ("gbm", "dnn", "mean"):
        raise ValueError(f"unknown model family: {family!r}")
    plan = plan or make_folds([p.id for p in dataset.profiles])
    fcfg = feature_cfg or FeatureConfig(vocabulary=dataset.vocabulary)
    if family == "gbm":
        mask = mask or ChunkMask.full()

    fold_male: list[float] = []
    fold_msle: list[float] = []
    for fold in range(plan.k):
        train, val = _split_fold(dataset, plan, fold)
        actual = np.array([p.checkins for p in val], dtype=np.float64)
        if family == "gbm":
            m, s = _gbm_fold_scores(train, val, mask, cfg or GbmConfig(), fcfg)
            fold_male.append(m)
            fold_msle.append(s)
            continue
        if family == "dnn":
            idx = build_index(train, 1000.0)
            fallback = float(np.median([p.checkins for p in train]))
            radius = cfg.radius if isinstance(cfg, DnnConfig) else 100.0
            dcfg = DnnConfig(radius=radius, fallback=fallback)
            preds = np.array([dnn_predict(idx, p.location, dcfg) for p in val])
        else:
            constant = mean_predict([p.checkins for p in train])
            preds = np.full(len(val), constant)
        fold_male.append(male(preds, actual))
        fold_msle.append(msle(preds, actual))

    label = family if family != "gbm" else f"gbm_{mask.to_string()}"
    return EvaluationReport(model=label, mask=mask if family == "gbm" else None,
                            fold_male=fold_male, fold_msle=fold_msle)


def pcc(x, y) -> float:
    """Pearson correlation coefficient of two equal-length samples."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("pcc needs two equal-length 1-D samples, length >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt(np.sum(dx * dx)))
    sy = float(np.sqrt(np.sum(dy * dy)))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation undefined: zero variance input")
    return float(np.sum(dx * dy) / (sx * sy))


def pcc_by_radius(dataset: Dataset, idx: SpatialIndex,
                  radii: Sequence[int] = PCC_RADII_M,
                  neighbor_signal: str = "checkins") -> dict[int, float]:
    """PCC between each profile's check-ins and its neighbors' total signal
    (check-ins or likes) within each radius, target excluded."""
    if neighbor_signal not in ("checkins", "likes"):
        raise ValueError("neighbor_signal must be 'checkins' or 'likes'")
    signal = idx.checkins if neighbor_signal == "checkins" else idx.likes
    radii = sorted(radii)
    max_r = max(radii)
    totals = np.zeros((len(dataset.profiles), len(radii)), dtype=np.float64)
    target = np.empty(len(dataset.profiles), dtype=np.float64)
    for i, p in enumerate(dataset.profiles):
        target[i] = p.checkins
        rows, dist = idx.gather(p.location, max_r, exclude_id=p.id)
        order = np.argsort(dist, kind="stable")
        csum = np.cumsum(signal[rows][order].astype(np.float64))
        d_sorted = dist[order]
        for j, r in enumerate(radii):
            k = int(np.searchsorted(d_sorted, r, side="right"))
            totals[i, j] = csum[k - 1] if k > 0 else 0.0
    return {r: pcc(target, totals[:, j]) for j, r in enumerate(radii)}


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the regularized incomplete beta (Lentz)."""
    max_iter, eps, fpmin = 500, 1e-15, 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def _betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b), accurate to ~1e-12."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _t_sf_two_sided(t: float, df: float) -> float:
    """Two-sided p-value of a Student t statistic via the incomplete beta."""
    if math.isinf(t):
        return 0.0
    return _betainc_reg(df / 2.0, 0.5, df / (df + t * t))


@dataclass(frozen=True)
class TTestResult:
    t: float
    p: float


def ttest_ind(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Welch two-sample t-test (unequal variances), two-sided."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("both samples need at least 2 observations")
    na, nb = a.size, b.size
    va, vb = float(a.var(ddof=1)), float(b.var(ddof=1))
    sa, sb = va / na, vb / nb
    diff = float(a.mean() - b.mean())
    se2 = sa + sb
    if se2 == 0.0:
        # Degenerate: both samples constant.
        if diff == 0.0:
            return TTestResult(t=0.0, p=1.0)
        return TTestResult(t=math.copysign(math.inf, diff), p=0.0)
    t = diff / math.sqrt(se2)
    df = se2 * se2 / (sa * sa / (na - 1) + sb * sb / (nb - 1))
    return TTestResult(t=t, p=_t_sf_two_sided(t, df))


@dataclass(frozen=True)
class SweepRow:
    mask: ChunkMask
    mean_male: float
    mean_msle: float


def all_masks() -> list[ChunkMask]:
    """The 63 non-empty chunk selections, in binary-string order."""
    masks = []
    for bits in itertools.product((0, 1), repeat=6):
        if any(bits):
            masks.append(ChunkMask(tuple(bool(x) for x in bits)))
    return masks


def variant_sweep(dataset: Dataset, family: str = "gbm", cfg=None,
                  plan: Optional[FoldPlan] = None,
                  feature_cfg: Optional[FeatureConfig] = None,
                  ) -> tuple[list[SweepRow], dict[str, list[int]]]:
    """Cross-validate every non-empty chunk mask; also count, per chunk, how
    often it appears among the top 10 variants by each metric.

    Full feature matrices are extracted once per fold and sliced per mask, so
    the sweep costs 63 fits per fold, not 63 extractions.
    """
    if family != "gbm":
        raise ValueError("variant sweep applies to the masked model family (gbm)")
    cfg = cfg or GbmConfig()
    plan = plan or make_folds([p.id for p in dataset.profiles])
    fcfg = feature_cfg or FeatureConfig(vocabulary=dataset.vocabulary)
    V = len(fcfg.vocabulary)

    folds_data = []
    for fold in range(plan.k):
        train, val = _split_fold(dataset, plan, fold)
        idx = build_index(train, max(fcfg.radii.radii))
        Xtr = build_feature_matrix(train, idx, fcfg, exclude_self=True)
        Xva = build_feature_matrix(val, idx, fcfg, exclude_self=False)
        ytr = np.log1p(np.array([p.checkins for p in train], dtype=np.float64))
        actual = np.array([p.checkins for p in val], dtype=np.float64)
        folds_data.append((Xtr, ytr, Xva, actual))

    rows: list[SweepRow] = []
    for mask in all_masks():
        cols = mask_columns(mask, V)
        fold_male, fold_msle = [], []
        for Xtr, ytr, Xva, actual in folds_data:
            model = gbm_fit(Xtr[:, cols], ytr, cfg)
            preds = np.maximum(np.expm1(model.predict_many(Xva[:, cols])), 0.0)
            fold_male.append(male(preds, actual))
            fold_msle.append(msle(preds, actual))
        rows.append(SweepRow(mask=mask,
                             mean_male=float(np.mean(fold_male)),
                             mean_msle=float(np.mean(fold_msle))))

    counts: dict[str, list[int]] = {}
    for metric, key in (("male", lambda r: r.mean_male),
                        ("msle", lambda r: r.mean_msle)):
        top10 = sorted(rows, key=key)[:10]
        counts[metric] = [sum(1 for r in top10 if r.mask.flags[c]) for c in range(6)]
    return rows, counts


def write_sweep_csv(path, rows: Sequence[SweepRow]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("mask,male,msle\n")
        for r in rows:
            fh.write(f"{r.mask.to_string()},{r.mean_male!r},{r.mean_msle!r}\n")


def write_counts_csv(path, counts: dict[str, list[int]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("metric,c1,c2,c3,c4,c5,c6\n")
        for metric in ("male", "msle"):
            fh.write(metric + "," + ",".join(str(c) for c in counts[metric]) + "\n")

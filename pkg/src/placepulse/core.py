"""Domain types shared by every other module, plus the in-memory dataset store.

All types are immutable after construction and safe for concurrent reads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

# Circular neighborhood ladder, meters: 50, 100, ..., 1000.
HOTSPOT_RADII_M = tuple(range(50, 1001, 50))

N_CHUNKS = 6


def normalize_label(label: str) -> str:
    """Lowercase a category label and collapse internal whitespace."""
    return " ".join(label.split()).lower()


def log1p_score(count: float) -> float:
    """ln(1 + count), the popularity score of a non-negative check-in count."""
    if not math.isfinite(count) or count < 0:
        raise ValueError(f"count must be finite and >= 0, got {count!r}")
    return math.log1p(count)


def inverse_log1p_score(score: float) -> float:
    """Invert log1p_score, clamping tiny negatives from float noise to 0."""
    return max(0.0, math.expm1(score))


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude pair in degrees.

    Construction never raises so that dirty data can still be represented and
    reported by dataset_validate; callers that need a guarantee use require_valid.
    """

    latitude: float
    longitude: float

    @property
    def is_valid(self) -> bool:
        return (math.isfinite(self.latitude) and -90.0 <= self.latitude <= 90.0
                and math.isfinite(self.longitude) and -180.0 <= self.longitude <= 180.0)

    def require_valid(self) -> "GeoPoint":
        if not self.is_valid:
            raise ValueError(f"invalid coordinates: ({self.latitude!r}, {self.longitude!r})")
        return self


@dataclass(frozen=True)
class PlaceProfile:
    """One business: identity, category labels, position and popularity counts."""

    id: str
    name: str
    categories: frozenset[str]
    location: GeoPoint
    checkins: int
    likes: int = 0
    is_food: bool = False

    def __post_init__(self):
        object.__setattr__(self, "categories", frozenset(self.categories))

    def with_food_flag(self, food: "FoodCategoryList") -> "PlaceProfile":
        flag = food.matches(self.categories)
        if flag == self.is_food:
            return self
        return PlaceProfile(self.id, self.name, self.categories, self.location,
                            self.checkins, self.likes, flag)


@dataclass(frozen=True)
class FoodCategoryList:
    """The curated set of category labels that mark a business as food-related."""

    labels: frozenset[str]

    def __post_init__(self):
        normalized = frozenset(normalize_label(l) for l in self.labels)
        if not normalized:
            raise ValueError("food category list must be non-empty")
        object.__setattr__(self, "labels", normalized)

    def matches(self, categories: Iterable[str]) -> bool:
        return any(c in self.labels for c in categories)


# A compact default list for datasets that ship without their own curation.
DEFAULT_FOOD_LABELS = (
    "asian restaurant", "bakery", "bar", "barbecue restaurant", "bistro",
    "breakfast & brunch restaurant", "bubble tea shop", "buffet restaurant",
    "burger restaurant", "cafe", "cafeteria", "chinese restaurant",
    "cocktail bar", "coffee shop", "deli", "dessert shop", "dim sum restaurant",
    "diner", "fast food restaurant", "food & beverage", "food & grocery",
    "food & restaurant", "food court", "food stand", "food truck",
    "french restaurant", "hawker stall", "ice cream parlor", "indian restaurant",
    "italian restaurant", "japanese restaurant", "juice bar", "korean restaurant",
    "malaysian restaurant", "mexican restaurant", "night club", "nightlife",
    "noodle house", "pizza place", "pub", "ramen restaurant", "restaurant",
    "seafood restaurant", "snack place", "steakhouse", "sushi restaurant",
    "tea room", "thai restaurant", "vegetarian restaurant", "western restaurant",
    "wine bar",
)


def default_food_list() -> FoodCategoryList:
    return FoodCategoryList(frozenset(DEFAULT_FOOD_LABELS))


class CategoryVocabulary:
    """Bijective label <-> index map; lexicographic order fixes the layout."""

    def __init__(self, labels: Sequence[str]):
        normalized = sorted({normalize_label(l) for l in labels})
        if not normalized:
            raise ValueError("vocabulary must contain at least one label")
        self.labels: tuple[str, ...] = tuple(normalized)
        self._index = {label: i for i, label in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return normalize_label(label) in self._index

    def index_of(self, label: str) -> int:
        key = normalize_label(label)
        if key not in self._index:
            raise KeyError(f"unknown category label: {label!r}")
        return self._index[key]

    def indices_of(self, labels: Iterable[str]) -> np.ndarray:
        return np.array(sorted(self.index_of(l) for l in labels), dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, CategoryVocabulary) and self.labels == other.labels


@dataclass(frozen=True)
class HotspotRadii:
    """The fixed 20-step radius ladder used by the hotspot feature chunks."""

    radii: tuple[int, ...] = HOTSPOT_RADII_M

    def __post_init__(self):
        if tuple(self.radii) != HOTSPOT_RADII_M:
            raise ValueError(f"radii must be the fixed ladder {HOTSPOT_RADII_M}")

    def __len__(self) -> int:
        return len(self.radii)


@dataclass(frozen=True)
class ChunkMask:
    """Selects which of the six feature chunks a model variant uses."""

    flags: tuple[bool, bool, bool, bool, bool, bool]

    def __post_init__(self):
        if len(self.flags) != N_CHUNKS:
            raise ValueError("mask needs exactly six flags")
        object.__setattr__(self, "flags", tuple(bool(f) for f in self.flags))

    @classmethod
    def full(cls) -> "ChunkMask":
        return cls((True,) * N_CHUNKS)

    @classmethod
    def from_string(cls, s: str) -> "ChunkMask":
        """Parse the 6-character binary notation, e.g. '110100'."""
        if len(s) != N_CHUNKS or any(c not in "01" for c in s):
            raise ValueError(f"mask must be six 0/1 characters, got {s!r}")
        return cls(tuple(c == "1" for c in s))

    def to_string(self) -> str:
        return "".join("1" if f else "0" for f in self.flags)

    @property
    def any_selected(self) -> bool:
        return any(self.flags)

    def __iter__(self):
        return iter(self.flags)


@dataclass(frozen=True)
class FeatureVector:
    """Six concatenated chunk segments describing one map point.

    c1: binary own-category indicators (length V)
    c2: neighbor category counts within the category radius (length V)
    c3/c4: log total / log average check-ins of food neighbors per radius (length 20)
    c5/c6: the same over all neighbors (length 20)
    """

    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    c4: np.ndarray
    c5: np.ndarray
    c6: np.ndarray

    def chunks(self) -> tuple[np.ndarray, ...]:
        return (self.c1, self.c2, self.c3, self.c4, self.c5, self.c6)

    def concat(self) -> np.ndarray:
        return np.concatenate([np.asarray(c, dtype=np.float64) for c in self.chunks()])

    def __len__(self) -> int:
        return sum(len(c) for c in self.chunks())


@dataclass
class Dataset:
    """Immutable bundle of profiles plus the vocabulary and food list built from them."""

    profiles: list[PlaceProfile]
    vocabulary: CategoryVocabulary
    food_list: FoodCategoryList

    def __len__(self) -> int:
        return len(self.profiles)

    def by_id(self, profile_id: str) -> PlaceProfile:
        for p in self.profiles:
            if p.id == profile_id:
                return p
        raise KeyError(profile_id)


def dataset_validate(d: Dataset) -> list[str]:
    """Check every type invariant; returns one message per violation (empty if clean).

    Violations are data, not failures: a dirty dataset still validates without raising.
    """
    violations: list[str] = []
    seen: set[str] = set()
    for p in d.profiles:
        if p.id in seen:
            violations.append(f"profile {p.id}: duplicate id")
        seen.add(p.id)
        if not p.categories:
            violations.append(f"profile {p.id}: empty category set")
        if not (math.isfinite(p.location.latitude) and -90.0 <= p.location.latitude <= 90.0):
            violations.append(f"profile {p.id}: latitude out of range")
        if not (math.isfinite(p.location.longitude) and -180.0 <= p.location.longitude <= 180.0):
            violations.append(f"profile {p.id}: longitude out of range")
        if p.checkins < 0:
            violations.append(f"profile {p.id}: negative checkins")
        if p.likes < 0:
            violations.append(f"profile {p.id}: negative likes")
        for label in p.categories:
            if label not in d.vocabulary:
                violations.append(f"profile {p.id}: label {label!r} missing from vocabulary")
        if p.is_food != d.food_list.matches(p.categories):
            violations.append(f"profile {p.id}: is_food flag inconsistent with food list")
    return violations

import math

import numpy as np
import pytest

from placepulse.core import GeoPoint
from placepulse.geo import (
    EARTH_RADIUS_M,
    build_index,
    haversine,
    knn,
    radius_query,
)
from placepulse.ingest import SynthConfig, synth_generate


def brute_force_radius(profiles, center, radius, exclude_id=None):
    """Independent O(n) scan: filter by distance, sort by (distance, id)."""
    hits = []
    for p in profiles:
        if exclude_id is not None and p.id == exclude_id:
            continue
        d = haversine(center, p.location)
        if d <= radius:
            hits.append((d, p.id))
    hits.sort()
    return hits


@pytest.fixture(scope="module")
def city():
    return synth_generate(SynthConfig(n_profiles=500, seed=11))


@pytest.fixture(scope="module")
def city_index(city):
    return build_index(city.profiles, max_radius=1000.0)


class TestHaversine:
    def test_identical_points(self):
        p = GeoPoint(1.3521, 103.8198)
        assert haversine(p, p) == 0.0

    def test_half_great_circle(self):
        d = haversine(GeoPoint(0, 0), GeoPoint(0, 180))
        assert d == pytest.approx(math.pi * EARTH_RADIUS_M, rel=1e-12)

    def test_city_scale_pair_vs_geodesic_oracle(self):
        # 786.116 m computed independently with the spherical law of cosines
        # and with chord length -> central angle (they agree to 6 figures).
        d = haversine(GeoPoint(1.2868, 103.8545), GeoPoint(1.2834, 103.8607))
        assert d == pytest.approx(786.116, rel=0.005)

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            a = GeoPoint(rng.uniform(-60, 60), rng.uniform(-170, 170))
            b = GeoPoint(rng.uniform(-60, 60), rng.uniform(-170, 170))
            assert haversine(a, b) == haversine(b, a)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            pts = [GeoPoint(rng.uniform(1.2, 1.4), rng.uniform(103.7, 104.0))
                   for _ in range(3)]
            ab = haversine(pts[0], pts[1])
            bc = haversine(pts[1], pts[2])
            ac = haversine(pts[0], pts[2])
            assert ac <= ab + bc + 1e-6 * max(ab + bc, 1.0)


class TestRadiusQuery:
    def test_empty_index(self):
        idx = build_index([], max_radius=1000.0)
        assert radius_query(idx, GeoPoint(1.3, 103.8), 500) == []

    def test_single_profile_at_center(self, city):
        p = city.profiles[0]
        idx = build_index([p], max_radius=1000.0)
        hits = radius_query(idx, p.location, 1.0)
        assert len(hits) == 1
        assert hits[0].profile.id == p.id
        assert hits[0].distance == 0.0

    def test_matches_brute_force(self, city, city_index):
        rng = np.random.default_rng(21)
        for _ in range(50):
            center = GeoPoint(rng.uniform(1.24, 1.34), rng.uniform(103.80, 103.90))
            r = rng.uniform(10, 1000)
            expected = brute_force_radius(city.profiles, center, r)
            got = [(h.distance, h.profile.id)
                   for h in radius_query(city_index, center, r)]
            assert got == expected

    def test_exclude_id(self, city, city_index):
        p = city.profiles[10]
        hits = radius_query(city_index, p.location, 500, exclude_id=p.id)
        assert all(h.profile.id != p.id for h in hits)
        expected = brute_force_radius(city.profiles, p.location, 500, exclude_id=p.id)
        assert [(h.distance, h.profile.id) for h in hits] == expected

    def test_boundary_is_inclusive(self):
        a = GeoPoint(1.30, 103.85)
        b = GeoPoint(1.30, 103.86)
        d = haversine(a, b)
        from placepulse.core import PlaceProfile
        p = PlaceProfile(id="b", name="b", categories=frozenset({"cafe"}),
                         location=b, checkins=1, likes=0, is_food=True)
        idx = build_index([p], max_radius=2000.0)
        assert len(radius_query(idx, a, d)) == 1          # at exactly r: included
        assert len(radius_query(idx, a, d * 0.999)) == 0

    def test_radius_above_max_rejected(self, city_index):
        with pytest.raises(ValueError):
            radius_query(city_index, GeoPoint(1.3, 103.85), 1500)

    def test_monotone_in_radius(self, city, city_index):
        rng = np.random.default_rng(5)
        for _ in range(20):
            center = GeoPoint(rng.uniform(1.24, 1.34), rng.uniform(103.80, 103.90))
            r1, r2 = sorted(rng.uniform(10, 1000, size=2))
            ids1 = {h.profile.id for h in radius_query(city_index, center, r1)}
            ids2 = {h.profile.id for h in radius_query(city_index, center, r2)}
            assert ids1 <= ids2


class TestKnn:
    def test_k_at_least_dataset(self, city, city_index):
        center = GeoPoint(1.29, 103.85)
        hits = knn(city_index, center, k=10_000)
        assert len(hits) == len(city.profiles)
        dists = [h.distance for h in hits]
        assert dists == sorted(dists)

    def test_k1_with_exclusion(self, city, city_index):
        p = city.profiles[0]
        hits = knn(city_index, p.location, k=1, exclude_id=p.id)
        assert len(hits) == 1
        assert hits[0].profile.id != p.id
        others = [(haversine(p.location, q.location), q.id)
                  for q in city.profiles if q.id != p.id]
        assert hits[0].profile.id == min(others)[1]

    def test_matches_brute_force_top10(self, city, city_index):
        rng = np.random.default_rng(6)
        for _ in range(20):
            center = GeoPoint(rng.uniform(1.24, 1.34), rng.uniform(103.80, 103.90))
            got = [(h.distance, h.profile.id) for h in knn(city_index, center, 10)]
            all_sorted = sorted((haversine(center, p.location), p.id)
                                for p in city.profiles)
            assert got == all_sorted[:10]

    def test_k_zero_rejected(self, city_index):
        with pytest.raises(ValueError):
            knn(city_index, GeoPoint(1.3, 103.85), 0)

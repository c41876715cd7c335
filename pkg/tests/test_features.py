import math

import numpy as np
import pytest

from placepulse.core import (
    CategoryVocabulary,
    ChunkMask,
    Dataset,
    GeoPoint,
    HotspotRadii,
)
from placepulse.features import (
    FeatureConfig,
    apply_mask,
    build_feature_matrix,
    encode_target_categories,
    extract_features,
    feature_names,
    hotspot_profile,
    mask_columns,
    neighbor_category_counts,
)
from placepulse.geo import build_index, haversine
from placepulse.ingest import SynthConfig, synth_generate


@pytest.fixture(scope="module")
def city():
    return synth_generate(SynthConfig(n_profiles=400, seed=13))


@pytest.fixture(scope="module")
def city_index(city):
    return build_index(city.profiles, max_radius=1000.0)


@pytest.fixture(scope="module")
def fcfg(city):
    return FeatureConfig(vocabulary=city.vocabulary)


def brute_category_counts(profiles, center, radius, vocab, exclude_id):
    counts = np.zeros(len(vocab), dtype=np.int64)
    for p in profiles:
        if p.id == exclude_id or not p.is_food:
            continue
        if haversine(center, p.location) <= radius:
            for label in p.categories:
                counts[vocab.index_of(label)] += 1
    return counts


def brute_hotspot(profiles, center, radii, food_only, mode, exclude_id):
    out = np.zeros(len(radii))
    for i, r in enumerate(radii):
        total = 0
        count = 0
        for p in profiles:
            if p.id == exclude_id or (food_only and not p.is_food):
                continue
            if haversine(center, p.location) <= r:
                total += p.checkins
                count += 1
        value = total if mode == "total" else total / max(1, count)
        out[i] = math.log1p(value)
    return out


class TestEncodeTargetCategories:
    VOCAB = CategoryVocabulary(["a", "b", "c", "d"])

    def test_two_of_four(self):
        vec = encode_target_categories({"a", "c"}, self.VOCAB)
        assert vec.tolist() == [1, 0, 1, 0]

    def test_all_four(self):
        assert encode_target_categories({"a", "b", "c", "d"}, self.VOCAB).tolist() == [1, 1, 1, 1]

    def test_empty(self):
        assert encode_target_categories(set(), self.VOCAB).tolist() == [0, 0, 0, 0]

    def test_unknown_label_named_in_error(self):
        with pytest.raises(KeyError, match="zoo"):
            encode_target_categories({"zoo"}, self.VOCAB)


class TestNeighborCategoryCounts:
    def test_counts_per_neighbor_category_pair(self, city, city_index, fcfg):
        # toy semantics: 5 neighbors of category A and 7 of B -> [5,7,0,0]
        p = city.profiles[17]
        got = neighbor_category_counts(city_index, p.location, fcfg, exclude_id=p.id)
        expected = brute_category_counts(city.profiles, p.location,
                                         fcfg.category_neighbor_radius,
                                         city.vocabulary, p.id)
        assert np.array_equal(got, expected)

    def test_empty_region(self, city_index, fcfg):
        got = neighbor_category_counts(city_index, GeoPoint(1.39, 103.99), fcfg)
        assert not got.any()

    def test_many_random_profiles(self, city, city_index, fcfg):
        rng = np.random.default_rng(1)
        for i in rng.integers(0, len(city.profiles), size=25):
            p = city.profiles[i]
            got = neighbor_category_counts(city_index, p.location, fcfg, exclude_id=p.id)
            expected = brute_category_counts(city.profiles, p.location,
                                             fcfg.category_neighbor_radius,
                                             city.vocabulary, p.id)
            assert np.array_equal(got, expected)


class TestHotspotProfile:
    def test_empty_region_is_zero(self, city_index):
        out = hotspot_profile(city_index, GeoPoint(1.39, 103.99), HotspotRadii(),
                              food_only=False, mode="total")
        assert out.tolist() == [0.0] * 20

    def test_single_neighbor_cumulative(self, city):
        anchor = city.profiles[0]
        # place one neighbor ~60 m east of the anchor point
        from placepulse.core import PlaceProfile
        lat = anchor.location.latitude
        lon = anchor.location.longitude + 60.0 / (111_194.9 * math.cos(math.radians(lat)))
        neighbor = PlaceProfile(id="n", name="n", categories=frozenset({"cafe"}),
                                location=GeoPoint(lat, lon), checkins=99, likes=0,
                                is_food=True)
        idx = build_index([neighbor], max_radius=1000.0)
        d = haversine(anchor.location, neighbor.location)
        assert 50 < d < 100
        out = hotspot_profile(idx, anchor.location, HotspotRadii(),
                              food_only=False, mode="total")
        assert out[0] == 0.0
        assert all(v == pytest.approx(math.log1p(99)) for v in out[1:])

    @pytest.mark.parametrize("food_only", [True, False])
    @pytest.mark.parametrize("mode", ["total", "average"])
    def test_matches_brute_force(self, city, city_index, food_only, mode):
        rng = np.random.default_rng(2)
        radii = HotspotRadii()
        for i in rng.integers(0, len(city.profiles), size=10):
            p = city.profiles[i]
            got = hotspot_profile(city_index, p.location, radii, food_only, mode,
                                  exclude_id=p.id)
            expected = brute_hotspot(city.profiles, p.location, radii.radii,
                                     food_only, mode, p.id)
            assert np.array_equal(got, expected)


class TestExtractFeatures:
    def test_toy_lengths(self):
        vocab = CategoryVocabulary(["a", "b", "c", "d"])
        from placepulse.core import PlaceProfile
        p = PlaceProfile(id="x", name="x", categories=frozenset({"a"}),
                         location=GeoPoint(1.3, 103.85), checkins=5, likes=0,
                         is_food=False)
        idx = build_index([p], max_radius=1000.0)
        fv = extract_features(p.location, {"a"}, idx, FeatureConfig(vocabulary=vocab))
        assert [len(c) for c in fv.chunks()] == [4, 4, 20, 20, 20, 20]
        assert len(fv) == 88

    def test_paper_scale_dimension(self):
        labels = [f"label {i:03d}" for i in range(357)]
        vocab = CategoryVocabulary(labels)
        cfg = FeatureConfig(vocabulary=vocab)
        assert cfg.total_features == 794

    def test_chunks_match_suboperations(self, city, city_index, fcfg):
        p = city.profiles[42]
        fv = extract_features(p.location, p.categories, city_index, fcfg,
                              exclude_id=p.id)
        assert np.array_equal(fv.c1, encode_target_categories(p.categories, fcfg.vocabulary))
        assert np.array_equal(
            fv.c2, neighbor_category_counts(city_index, p.location, fcfg, p.id))
        radii = fcfg.radii
        assert np.array_equal(fv.c3, hotspot_profile(city_index, p.location, radii, True, "total", p.id))
        assert np.array_equal(fv.c4, hotspot_profile(city_index, p.location, radii, True, "average", p.id))
        assert np.array_equal(fv.c5, hotspot_profile(city_index, p.location, radii, False, "total", p.id))
        assert np.array_equal(fv.c6, hotspot_profile(city_index, p.location, radii, False, "average", p.id))

    def test_self_exclusion_equals_dataset_surgery(self, city, fcfg):
        rng = np.random.default_rng(3)
        full_idx = build_index(city.profiles, 1000.0)
        for i in rng.integers(0, len(city.profiles), size=8):
            p = city.profiles[i]
            with_exclusion = extract_features(p.location, p.categories, full_idx,
                                              fcfg, exclude_id=p.id)
            surgery = [q for q in city.profiles if q.id != p.id]
            surgery_idx = build_index(surgery, 1000.0)
            without = extract_features(p.location, p.categories, surgery_idx, fcfg)
            for a, b in zip(with_exclusion.chunks(), without.chunks()):
                assert np.array_equal(a, b)

    def test_determinism(self, city, city_index, fcfg):
        p = city.profiles[7]
        a = extract_features(p.location, p.categories, city_index, fcfg, p.id)
        b = extract_features(p.location, p.categories, city_index, fcfg, p.id)
        assert all(np.array_equal(x, y) for x, y in zip(a.chunks(), b.chunks()))

    def test_invariants_across_profiles(self, city, city_index, fcfg):
        rng = np.random.default_rng(4)
        for i in rng.integers(0, len(city.profiles), size=20):
            p = city.profiles[i]
            fv = extract_features(p.location, p.categories, city_index, fcfg, p.id)
            assert set(np.unique(fv.c1)) <= {0, 1}
            assert (fv.c2 >= 0).all()
            if fv.c2.any():
                assert fv.c2.sum() >= fv.c2.max()
            assert (np.diff(fv.c3) >= 0).all()         # cumulative totals
            assert (np.diff(fv.c5) >= 0).all()
            # food totals never exceed all-business totals
            assert (np.expm1(fv.c3) <= np.expm1(fv.c5) + 1e-9).all()
            assert all(np.isfinite(c).all() for c in fv.chunks())


class TestApplyMask:
    def test_full_mask_keeps_everything(self, city, city_index, fcfg):
        p = city.profiles[3]
        fv = extract_features(p.location, p.categories, city_index, fcfg, p.id)
        flat = apply_mask(fv, ChunkMask.full())
        assert np.array_equal(flat, fv.concat())

    def test_partial_mask_lengths(self, city, city_index, fcfg):
        V = len(fcfg.vocabulary)
        p = city.profiles[3]
        fv = extract_features(p.location, p.categories, city_index, fcfg, p.id)
        picked = apply_mask(fv, ChunkMask.from_string("110100"))
        assert len(picked) == 2 * V + 20
        assert np.array_equal(picked[:V], fv.c1)
        assert np.array_equal(picked[V:2 * V], fv.c2)
        assert np.array_equal(picked[2 * V:], fv.c4)

    def test_single_chunk(self, city, city_index, fcfg):
        p = city.profiles[3]
        fv = extract_features(p.location, p.categories, city_index, fcfg, p.id)
        assert np.array_equal(apply_mask(fv, ChunkMask.from_string("000010")), fv.c5)

    def test_empty_mask_rejected(self, city, city_index, fcfg):
        p = city.profiles[3]
        fv = extract_features(p.location, p.categories, city_index, fcfg, p.id)
        with pytest.raises(ValueError):
            apply_mask(fv, ChunkMask((False,) * 6))

    def test_mask_columns_agree_with_apply_mask(self, city, city_index, fcfg):
        p = city.profiles[5]
        fv = extract_features(p.location, p.categories, city_index, fcfg, p.id)
        full = fv.concat()
        for s in ("100000", "010101", "001110", "111111"):
            mask = ChunkMask.from_string(s)
            assert np.array_equal(full[mask_columns(mask, len(fcfg.vocabulary))],
                                  apply_mask(fv, mask))


def test_feature_names_layout(fcfg):
    names = feature_names(fcfg)
    V = len(fcfg.vocabulary)
    assert len(names) == 2 * V + 80
    assert names[0].startswith("c1_")
    assert names[V].startswith("c2_")
    assert names[2 * V] == "c3_50"
    assert names[-1] == "c6_1000"


def test_build_feature_matrix_rows_align(city, city_index, fcfg):
    subset = city.profiles[:5]
    X = build_feature_matrix(subset, city_index, fcfg, exclude_self=True)
    for i, p in enumerate(subset):
        fv = extract_features(p.location, p.categories, city_index, fcfg, p.id)
        assert np.array_equal(X[i], fv.concat())


def test_export_feature_matrix_csv(tmp_path, city, city_index, fcfg):
    from placepulse.features import export_feature_matrix
    path = tmp_path / "features.csv"
    subset = city.profiles[:4]
    export_feature_matrix(path, subset, city_index, fcfg)
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    assert header == feature_names(fcfg) + ["target_checkins"]
    assert len(lines) == 5
    first = [float(v) for v in lines[1].split(",")]
    fv = extract_features(subset[0].location, subset[0].categories, city_index,
                          fcfg, subset[0].id)
    assert np.array_equal(np.array(first[:-1]), fv.concat())
    assert first[-1] == subset[0].checkins

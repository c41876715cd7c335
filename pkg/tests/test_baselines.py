import math

import numpy as np
import pytest

from placepulse.baselines import DnnConfig, dnn_predict, mean_predict
from placepulse.core import GeoPoint, PlaceProfile
from placepulse.geo import build_index


def place(pid, lat, lon, checkins):
    return PlaceProfile(id=pid, name=pid, categories=frozenset({"cafe"}),
                        location=GeoPoint(lat, lon), checkins=checkins,
                        likes=0, is_food=True)


CENTER = GeoPoint(1.30, 103.85)


def offset(meters_east):
    lon = CENTER.longitude + meters_east / (111_194.9 * math.cos(math.radians(CENTER.latitude)))
    return CENTER.latitude, lon


class TestDnnPredict:
    def test_single_neighbor_roundtrips(self):
        idx = build_index([place("a", *offset(30), 57)], 1000.0)
        got = dnn_predict(idx, CENTER, DnnConfig(radius=100.0, fallback=5))
        assert got == pytest.approx(57.0, abs=1e-9)

    def test_no_neighbors_falls_back_to_median(self):
        idx = build_index([place("a", *offset(900), 57)], 1000.0)
        got = dnn_predict(idx, CENTER, DnnConfig(radius=100.0, fallback=123.0))
        assert got == 123.0

    def test_two_neighbor_log_mean(self):
        idx = build_index([place("a", *offset(10), 100),
                           place("b", *offset(20), 300)], 1000.0)
        got = dnn_predict(idx, CENTER, DnnConfig(radius=100.0, fallback=0))
        # exp((ln 101 + ln 301) / 2) - 1, hand-computed
        assert got == pytest.approx(173.35882541471776, abs=1e-9)

    def test_permutation_invariant(self):
        a = [place(f"p{i}", *offset(5 + i), c)
             for i, c in enumerate([5, 50, 500, 5000])]
        idx1 = build_index(a, 1000.0)
        idx2 = build_index(list(reversed(a)), 1000.0)
        cfg = DnnConfig(radius=200.0, fallback=0)
        assert dnn_predict(idx1, CENTER, cfg) == pytest.approx(
            dnn_predict(idx2, CENTER, cfg), abs=1e-12)

    def test_exclusion(self):
        target = place("t", CENTER.latitude, CENTER.longitude, 10_000)
        other = place("o", *offset(40), 64)
        idx = build_index([target, other], 1000.0)
        got = dnn_predict(idx, CENTER, DnnConfig(radius=100.0, fallback=0),
                          exclude_id="t")
        assert got == pytest.approx(64.0, abs=1e-9)

    def test_bad_radius(self):
        with pytest.raises(ValueError):
            DnnConfig(radius=0.0)


class TestMeanPredict:
    def test_constant_targets(self):
        assert mean_predict([13, 13, 13]) == pytest.approx(13.0, abs=1e-9)

    def test_single_zero(self):
        assert mean_predict([0]) == 0.0

    def test_log_mean_of_mixed(self):
        got = mean_predict([0.0, math.e - 1.0])
        assert got == pytest.approx(0.6487212707001282, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mean_predict([])

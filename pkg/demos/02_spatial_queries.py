"""Distance math and neighborhood queries.

Shows the haversine distance, the grid index, radius queries against a
brute-force check, and k-nearest-neighbor retrieval.
"""
import time

import numpy as np

from placepulse import GeoPoint, SynthConfig, build_index, haversine, knn, radius_query, synth_generate

city = synth_generate(SynthConfig(n_profiles=2000, seed=3))
idx = build_index(city.profiles, max_radius=1000.0)

a = city.profiles[0].location
b = city.profiles[1].location
print(f"haversine between two profiles: {haversine(a, b):.1f} m")

center = GeoPoint(1.2875, 103.8475)
for r in (100, 300, 1000):
    hits = radius_query(idx, center, r)
    print(f"radius {r:>4} m -> {len(hits):>4} businesses"
          + (f", nearest at {hits[0].distance:.1f} m" if hits else ""))

nearest = knn(idx, center, k=5)
print("\n5 nearest businesses:")
for h in nearest:
    print(f"  {h.profile.name:<12} {h.distance:8.1f} m  {h.profile.checkins:>7} check-ins")

# the index answers exactly what a full scan would, just faster
t0 = time.time()
for _ in range(1000):
    radius_query(idx, center, 500)
dt_index = time.time() - t0
t0 = time.time()
for _ in range(20):
    [p for p in city.profiles if haversine(center, p.location) <= 500]
dt_scan = (time.time() - t0) * 50
print(f"\n1000 indexed queries: {dt_index:.2f}s; equivalent full scans: ~{dt_scan:.2f}s")

"""The serving path end to end, in process: build a city, train a model,
stand up the service state, and score a hypothetical pin.

The same handlers back the HTTP endpoints; `placepulse serve` exposes them
over HTTP for the map UI in frontend/.
"""
import numpy as np

from placepulse import GbmConfig, SynthConfig, build_index, fit, synth_generate
from placepulse.features import FeatureConfig, build_feature_matrix
from placepulse.service import handle_health, handle_neighbors, handle_predict, make_state

city = synth_generate(SynthConfig(n_profiles=2000, seed=9))
fcfg = FeatureConfig(vocabulary=city.vocabulary)
idx = build_index(city.profiles, max_radius=1000.0)
X = build_feature_matrix(city.profiles, idx, fcfg, exclude_self=True)
y = np.log1p(np.array([p.checkins for p in city.profiles], dtype=np.float64))
model = fit(X, y, GbmConfig(n_iterations=150, max_depth=5, seed=0))

state = make_state(city, model)
health, status = handle_health(state)
print(f"health: {health} (HTTP {status})")

pin = {"latitude": 1.2875, "longitude": 103.8475,
       "categories": ["cafe"], "radius": 500}
out = handle_predict(state, pin)
print(f"\npredicted check-ins for a new cafe at the pin: {out['predicted_checkins']:.2f}")
print(f"rank {out['rank']} among {out['cohort_size']} businesses within 500 m")
print(f"cohort min/median/max: {out['cohort_min']}/{out['cohort_median']}/{out['cohort_max']}")

nearby = handle_neighbors(state, pin["latitude"], pin["longitude"], 200)
print(f"\nclosest businesses within 200 m:")
for n in nearby["neighbors"][:5]:
    print(f"  {n['name']:<14} {n['distance_m']:7.1f} m  {n['checkins']:>7} check-ins  {n['likes']:>6} likes")

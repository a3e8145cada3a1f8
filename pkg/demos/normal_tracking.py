"""Estimating an unknown mean from noisy readings with a normal prior.

Three routes to the posterior after a batch of readings:
  * folding the normal translator h over the readings,
  * one update with the conjunction of the readings' likelihoods,
  * one update with the sufficient statistic q(-, sum y) alone.

    python3 demos/normal_tracking.py
"""

import numpy as np

from conjugate_channels.conjugacy import state_distance
from conjugate_channels.families import NoiseLevel, NormalParams, h_normal, normal_channel, normal_likelihood
from conjugate_channels.suffstat import fold_translator, multi_update, normal_stat, stat_update

rng = np.random.default_rng(11)
truth, nu = 2.7, NoiseLevel(0.8)
readings = list(rng.normal(truth, nu.nu, size=12))

N = normal_channel()
prior_params = NormalParams(0.0, 3.0)
prior = N(prior_params)
lik = normal_likelihood(nu)

p = prior_params
print(" k  reading    mean      sd")
for k, y in enumerate(readings, 1):
    p = h_normal(p, nu, y)
    print(f"{k:2d}  {y:7.3f}  {p.mu:7.4f}  {p.sigma:6.4f}")

folded = fold_translator(lambda q, y: h_normal(q, nu, y), prior_params, readings)
fused = multi_update(prior, lik, readings)
summarised = stat_update(normal_stat(len(readings), nu), prior, readings)

print(f"\ntrue mean {truth}, sample mean {np.mean(readings):.4f}")
print(f"translator posterior  N({folded.mu:.6f}, {folded.sigma:.6f})")
print(f"fused vs translator      {state_distance(fused, N(folded)):.2e}")
print(f"summary vs translator    {state_distance(summarised, N(folded)):.2e}")

"""A screening test as a finite channel, inverted by enumeration.

    python3 demos/discrete_inversion.py
"""

from conjugate_channels import discrete as dc

prior = dc.FiniteDist({"ill": 0.01, "healthy": 0.99})
test = dc.DiscreteChannel({
    "ill": {"pos": 0.9, "neg": 0.1},
    "healthy": {"pos": 0.05, "neg": 0.95},
})

print("predicted test outcomes:", (test >> prior).as_dict())
dagger = dc.inversion(test, prior)
for y in ("pos", "neg"):
    print(f"posterior after {y}:", {k: round(v, 5) for k, v in dagger(y).as_dict().items()})

# the same posterior, as an update with the pulled-back point predicate
pos = dc.update(prior, dc.pull(test, dc.point_predicate(["neg", "pos"], "pos")))
print("update with test << 1_pos:", {k: round(v, 5) for k, v in pos.as_dict().items()})

# two independent positive tests: successive updates, or one update with the conjunction
once = dc.pull(test, dc.point_predicate(["neg", "pos"], "pos"))
twice = dc.update(dc.update(prior, once), once)
fused = dc.update(prior, once & once)
print("two positives, successive:", {k: round(v, 5) for k, v in twice.as_dict().items()})
print("two positives, fused:     ", {k: round(v, 5) for k, v in fused.as_dict().items()})

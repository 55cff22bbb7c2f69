"""
Exact stationary samples by coupling from the past
==================================================
"""

from fractions import Fraction

import numpy as np

from syncwalk import (
    MappingLaw,
    RngStream,
    cftp_batch,
    cftp_sample,
    coalescence_stats,
    mix,
    simulate_forward,
    stationary,
    tv_distance,
)

# A law whose stationary distribution is not uniform.  Maps by 0-based images.
law = MappingLaw({(0, 0, 1): "1/2", (1, 2, 0): "1/4", (0, 1, 0): "1/4"})
lam = stationary(law.marginal())
print("stationary law:", [str(w) for w in lam])

# %%
# One draw, with its certificate: the composed word is constant.
res = cftp_sample(law, RngStream(seed=1))
print("value", res.value, "depth", res.depth, "horizon", res.horizon)
print("word:", list(res.word))

# %%
# Many draws at once.  The empirical law should sit within sampling error.
values, depths = cftp_batch(law, 20_000, RngStream(seed=2))
emp = np.bincount(values, minlength=3) / values.size
print("empirical", emp.round(4), "TV", round(tv_distance(emp, [float(w) for w in lam]), 4))
print("mean depth", depths.mean())

# a long forward run lands on the same law, only approximately
trace = simulate_forward(law, 0, 50_000, RngStream(seed=3))
fwd = np.bincount(trace.states, minlength=3) / len(trace.states)
print("forward  ", fwd.round(4))

# %%
# Coalescence slows down when the merging map gets rare.
rot = MappingLaw.point_mass((1, 2, 0))
merge = MappingLaw.point_mass((1, 1, 2))
for eps in ("1/2", "1/5", "1/20", "1/100"):
    s = coalescence_stats(mix(rot, merge, Fraction(eps)), 2000, RngStream(0))
    print(f"eps={eps:>5}  mean depth {s.mean:8.1f}  p99 {s.p99:8.0f}")

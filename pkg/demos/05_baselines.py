"""Shared death probabilities keep the population small.

When every individual faces the same death probability, constant or freshly
drawn each step, the size returns to a stationary level near 1/E(c). Giving
each individual its own marker instead makes the size grow without bound.
"""
import numpy as np

from hetpop import ConstantDeath, FmsConfig, RandomEnv, Uniform, expected_size, recurrence_stats, simulate_fms
from hetpop.population import SimConfig, simulate_forward

n = 10**4
const = simulate_fms(FmsConfig(ConstantDeath(0.005), n, seed=5))
renv = simulate_fms(FmsConfig(RandomEnv(Uniform(0.01)), n, seed=5, stream_id=1))
het = simulate_forward(SimConfig(n, seed=5, stream_id=2), Uniform(0.01))

for name, traj in (("constant c=0.005", const), ("random env U(0,0.01)", renv), ("heterogeneous U(0,0.01)", het)):
    st = recurrence_stats(traj, 1)
    halves = [float(np.mean(traj.sizes[: n // 2])), float(np.mean(traj.sizes[n // 2:]))]
    print(f"{name:<25} final {traj.final_size:>5}  max {st.max_size:>5}  "
          f"time avg {st.time_avg:7.1f}  halves {halves[0]:7.1f} {halves[1]:7.1f}")

print(f"\nexpected heterogeneous size at n={n}: {expected_size(n, Uniform(0.01)):.1f}, still growing like 100 ln n")

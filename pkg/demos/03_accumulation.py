"""Marker values of the survivors pile up only at zero.

In the limiting point set every index k carries a marker c_k and is kept
with probability (1 - c_k)**(k-1). Above any threshold b only finitely many
points survive; their mean number is at most 1/b, and ln(1/b) for C uniform
on (0, 1).
"""
import numpy as np

from hetpop import Uniform, sample_point_set, tail_count_bound
from hetpop.experiments import accumulation_counts

model = Uniform(1.0)
ps = sample_point_set(model, 10**5, rng=11)
print(f"one realisation: {len(ps)} points with index <= 1e5")
for b in (0.5, 0.1, 0.01, 0.001):
    print(f"  points with c > {b:<6}: {ps.count_above(b, min_index=1)}")

print("\nmean count above b over 500 replicas vs ln(1/b)")
for b in (0.5, 0.1, 0.01):
    counts = accumulation_counts(model, 10**5, b, 500, seed=3)[:, 0]
    print(f"  b={b:<5} mc {counts.mean():6.3f}  ln(1/b) {tail_count_bound(model, b):6.3f}  1/b {1 / b:6.1f}")

# a few of the survivors with the largest markers
order = np.argsort(ps.c)[::-1][:5]
print("\nlargest markers (k, c):", [(int(ps.k[i]), round(float(ps.c[i]), 4)) for i in order])

"""The uniform case grows like (1/a) ln n and concentrates.

For C uniform on (0, a) the expected size has a closed form. Its ratio to
(1/a) ln n creeps up to 1, and the coefficient of variation shrinks, so the
size divided by (1/a) ln n settles near one.
"""
import math

from hetpop import Uniform, expected_size_uniform, growth_ratio, variance_size
from hetpop.population import SimConfig, simulate_forward

a = 0.1
print(f"{'n':>10}{'E|A_n|':>12}{'(1/a) ln n':>12}{'ratio':>8}{'sd/mean':>10}")
for k in range(2, 8):
    n = 10**k
    mean = expected_size_uniform(n, a)
    sd = math.sqrt(variance_size(n, Uniform(a)))
    print(f"{n:>10}{mean:>12.2f}{math.log(n) / a:>12.2f}{growth_ratio(n, a):>8.4f}{sd / mean:>10.4f}")

# forward dynamics from different founding populations: the founders die out
# and every path joins the same log curve
n = 10**4
print(f"\nForward dynamics, a=0.01, n={n}")
for m in (1, 100, 1000):
    traj = simulate_forward(SimConfig(n, m, seed=7, stream_id=m), Uniform(0.01))
    marks = [int(traj.sizes[t]) for t in (10, 100, 1000, n)]
    print(f"  m={m:<5} sizes at t=10,100,1000,{n}: {marks}")

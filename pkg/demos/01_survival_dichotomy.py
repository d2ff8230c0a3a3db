"""Does the population blow up? It depends on E(1/C).

Individuals that draw a small death probability live for a long time. If C
puts enough mass near zero, E(1/C) is infinite and the expected size keeps
growing; otherwise it levels off. This script prints the exact expected size
for three laws of C and a Monte Carlo check on the lifetime construction.
"""
from hetpop import Constant, PowerLaw, Uniform, classify, expected_size, mc_mean_ci, mean_inverse
from hetpop.experiments import tilde_sizes

SEED = 2024

models = {
    "Uniform(0.1)": Uniform(0.1),
    "PowerLaw(0.5)": PowerLaw(0.5),
    "Constant(0.1)": Constant(0.1),
}

print(f"{'model':<15}{'E(1/C)':>10}{'class':>11}" + "".join(f"{'n=' + str(n):>12}" for n in (10, 10**3, 10**5)))
for name, model in models.items():
    row = f"{name:<15}{mean_inverse(model):>10.4g}{classify(model).value:>11}"
    row += "".join(f"{expected_size(n, model):>12.2f}" for n in (10, 10**3, 10**5))
    print(row)

# the log growth for Uniform(0.1) against simulation
print("\nUniform(0.1), 2000 replicas of the lifetime construction")
ns = [10, 100, 1000, 10000]
table = tilde_sizes(Uniform(0.1), ns[-1], 2000, SEED, checkpoints=ns)
for j, n in enumerate(ns):
    ci = mc_mean_ci(table[:, j])
    print(f"  n={n:>6}  mc {ci.mean:8.2f} +/- {ci.stderr:.2f}   exact {expected_size(n, Uniform(0.1)):8.2f}")

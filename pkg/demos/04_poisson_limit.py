"""Zooming into the corner gives a Poisson process.

Stretch time by L and blow up markers by L. Counts in the box
[Lw, Lz] x (lo/L, hi/L) become Poisson with mean given by the integral of
exp(-sy). The power-law case needs a location a and a narrower window
L**-beta; with beta = 1/(1-alpha) the counts vanish as L grows, while
beta = 1 + alpha reproduces the stated limiting intensity.
"""
from hetpop import PowerLawBox, UniformBox, intensity_powerlaw_box, intensity_uniform_box, poisson_gof
from hetpop.experiments import powerlaw_box_counts, uniform_box_counts
from hetpop.point_process import prelimit_mean_powerlaw_box, prelimit_mean_uniform_box

SEED = 99
reps = 5000

print("uniform case, box [1,2] x [1,2]")
for L in (50, 200, 800):
    box = UniformBox(1, 2, 1, 2, L)
    counts = uniform_box_counts([box], reps, SEED)[:, 0]
    rep = poisson_gof(counts, counts.mean())
    print(f"  L={L:<4} mean {counts.mean():.4f}  exact {prelimit_mean_uniform_box(box):.4f}  "
          f"limit {intensity_uniform_box(box):.4f}  dispersion {rep.dispersion_index:.3f}  p {rep.p_value:.3f}")

alpha = 0.5
print(f"\npower-law case alpha={alpha}, location 1, time [1,2], window (0,1)")
for beta in (None, 1 + alpha):
    for L in (200, 800):
        box = PowerLawBox(1.0, 1, 2, 0, 1, L, beta)
        counts = powerlaw_box_counts(alpha, [box], reps, SEED)[:, 0]
        print(f"  beta={box.scale_exponent(alpha):<4} L={L:<4} mean {counts.mean():.4f}  "
              f"exact {prelimit_mean_powerlaw_box(alpha, box):.4f}  limit {intensity_powerlaw_box(alpha, box):.4f}")

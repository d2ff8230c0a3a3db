"""Monte Carlo summaries and goodness-of-fit tools for count data."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .distributions import as_stream

__all__ = ["MeanCI", "GofReport", "mc_mean_ci", "poisson_gof", "poisson_bins",
           "two_sample_ks_discrete", "dispersion_index"]

_MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class MeanCI:
    mean: float
    stderr: float
    ci95: tuple[float, float]

    def covers(self, value: float, n_se: float = 3.0) -> bool:
        """True when ``value`` lies within ``n_se`` standard errors of the mean."""
        return abs(self.mean - value) <= n_se * self.stderr


@dataclass(frozen=True)
class GofReport:
    chi_square: float
    dof: int
    p_value: float
    dispersion_index: float

    CSV_HEADER = "chi_square,dof,p_value,dispersion"

    def csv_row(self) -> str:
        return f"{self.chi_square!r},{self.dof},{self.p_value!r},{self.dispersion_index!r}"

    def to_csv(self) -> str:
        return f"{self.CSV_HEADER}\n{self.csv_row()}\n"


def mc_mean_ci(samples) -> MeanCI:
    """Sample mean, standard error (ddof=1) and normal 95% interval."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    mean = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(x.size))
    return MeanCI(mean, se, (mean - 1.96 * se, mean + 1.96 * se))


def dispersion_index(counts) -> float:
    """Sample variance over sample mean; NaN if every count is zero."""
    x = np.asarray(counts, dtype=float)
    mean = x.mean()
    if mean == 0.0:
        return math.nan
    return float(x.var(ddof=1) / mean)


def poisson_bins(n: int, lam: float) -> list[tuple[int, float]]:
    """Bin edges for a chi-square test against Poisson(``lam``).

    Returns ``(start, probability)`` pairs; bin ``i`` covers counts from its
    start up to the next start minus one, the first bin absorbs everything
    below and the last bin is open-ended. Every bin has expected count at
    least 5 under ``n`` samples.
    """
    # left bin {0..lo}
    lo = 0
    while n * special.pdtr(lo, lam) < _MIN_EXPECTED and n * special.pdtrc(lo, lam) >= _MIN_EXPECTED:
        lo += 1
    bins = [(0, float(special.pdtr(lo, lam)))]
    j = lo + 1
    while True:
        p_j = math.exp(j * math.log(lam) - lam - math.lgamma(j + 1))
        beyond = float(special.pdtrc(j, lam))  # P(X > j)
        if n * p_j < _MIN_EXPECTED or n * beyond < _MIN_EXPECTED:
            break
        bins.append((j, p_j))
        j += 1
    tail = float(special.pdtrc(j - 1, lam))  # P(X >= j)
    bins.append((j, tail))
    while len(bins) > 1 and n * bins[-1][1] < _MIN_EXPECTED:
        start, p = bins.pop(-2)
        bins[-1] = (start, p + bins[-1][1])
    while len(bins) > 1 and n * bins[0][1] < _MIN_EXPECTED:
        _, p = bins.pop(0)
        bins[0] = (0, p + bins[0][1])
    return bins


def poisson_gof(counts, lam: float) -> GofReport:
    """Chi-square goodness of fit of integer counts to Poisson(``lam``).

    Bins follow :func:`poisson_bins`; the p-value is the upper regularized
    incomplete gamma ``Q(dof/2, chi2/2)``.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    x = np.asarray(counts)
    if x.size < 100:
        raise ValueError("need at least 100 counts")
    if np.any(x < 0):
        raise ValueError("counts must be non-negative")
    n = x.size
    bins = poisson_bins(n, lam)
    if len(bins) < 2:
        raise ValueError(f"Poisson({lam}) with {n} samples leaves fewer than two bins")
    starts = np.array([s for s, _ in bins])
    probs = np.array([p for _, p in bins])
    idx = np.searchsorted(starts, x, side="right") - 1
    observed = np.bincount(idx, minlength=len(bins))
    expected = n * probs
    chi2 = float(np.sum((observed - expected) ** 2 / expected))
    dof = len(bins) - 1
    p = float(special.gammaincc(dof / 2.0, chi2 / 2.0))
    return GofReport(chi2, dof, p, dispersion_index(x))


def _ecdf_gap(counts_x, totals, nx, ny):
    fx = np.cumsum(counts_x) / nx
    fy = np.cumsum(totals - counts_x) / ny
    return float(np.max(np.abs(fx - fy)))


def two_sample_ks_discrete(xs, ys, rng=0, n_permutations: int = 1000) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov distance with a permutation p-value.

    Ties are common in integer data, so the null distribution is built by
    relabelling the pooled sample ``n_permutations`` times rather than from
    the asymptotic KS law. ``p = (1 + #{D* >= D}) / (1 + n_permutations)``.
    """
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    if xs.size == 0 or ys.size == 0:
        raise ValueError("both samples must be non-empty")
    if n_permutations < 1:
        raise ValueError("n_permutations must be positive")
    levels, codes = np.unique(np.concatenate([xs, ys]), return_inverse=True)
    codes = codes.ravel()
    nx, ny, k = xs.size, ys.size, levels.size
    totals = np.bincount(codes, minlength=k)
    d_obs = _ecdf_gap(np.bincount(codes[:nx], minlength=k), totals, nx, ny)
    gen = as_stream(rng).generator
    hits = 0
    for _ in range(n_permutations):
        perm = gen.permutation(codes)
        if _ecdf_gap(np.bincount(perm[:nx], minlength=k), totals, nx, ny) >= d_obs - 1e-12:
            hits += 1
    return d_obs, (1 + hits) / (1 + n_permutations)

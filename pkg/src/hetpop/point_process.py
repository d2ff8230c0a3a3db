"""Truncated samples of the limiting point set and rescaled box statistics.

Two inclusion conventions coexist on purpose. :func:`sample_point_set` keeps
index ``k`` when ``G_k >= k`` (probability ``(1-c)**(k-1)``), while the box
counters use ``G_l > l`` (probability ``(1-c)**l``) so that their means match
``sum_l int (1-x)**l f(x) dx`` exactly. The two differ by one index shift,
which is immaterial once the time axis is stretched by ``L``.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .distributions import CModel, PowerLaw, Uniform, as_stream

__all__ = [
    "PointSet",
    "UniformBox",
    "PowerLawBox",
    "sample_point_set",
    "truncation_tail",
    "count_in_uniform_box",
    "count_in_uniform_boxes",
    "count_in_powerlaw_box",
    "independence_counts",
    "intensity_uniform_box",
    "intensity_powerlaw_box",
    "prelimit_mean",
    "prelimit_mean_uniform_box",
    "prelimit_mean_powerlaw_box",
    "min_separating_scale",
]


@dataclass(frozen=True, eq=False)
class PointSet:
    """Points ``(k, c_k)`` of the limiting set with index at most ``K``."""

    k: np.ndarray
    c: np.ndarray
    K: int

    def __len__(self):
        return int(self.k.size)

    def count_above(self, b: float, min_index: int = 0) -> int:
        return int(np.count_nonzero((self.c > b) & (self.k >= min_index)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("k,c\n")
        for k, c in zip(self.k.tolist(), self.c.tolist()):
            buf.write(f"{k},{c!r}\n")
        return buf.getvalue()


def _index_range(L, w, z):
    return math.ceil(L * w), math.floor(L * z)


@dataclass(frozen=True)
class UniformBox:
    """Time window ``[w, z]`` and c-window ``(lo, hi)`` before rescaling by ``L``."""

    w: float
    z: float
    lo: float
    hi: float
    L: int

    def __post_init__(self):
        if not (0.0 < self.w <= self.z):
            raise ValueError(f"need 0 < w <= z, got w={self.w}, z={self.z}")
        if not (0.0 <= self.lo <= self.hi):
            raise ValueError(f"need 0 <= lo <= hi, got lo={self.lo}, hi={self.hi}")
        if self.L < 1:
            raise ValueError("L must be a positive integer")
        if self.hi / self.L > 1.0:
            raise ValueError("rescaled c-interval escapes (0, 1)")

    @property
    def index_range(self) -> tuple[int, int]:
        return _index_range(self.L, self.w, self.z)

    @property
    def c_interval(self) -> tuple[float, float]:
        return self.lo / self.L, self.hi / self.L


@dataclass(frozen=True)
class PowerLawBox:
    """Box at location ``a``: c-window ``a/L + (lo, hi)/L**beta``.

    ``beta=None`` means ``1/(1-alpha)`` for whichever ``alpha`` the box is used
    with. An explicit ``beta`` overrides that choice.
    """

    a: float
    w: float
    z: float
    lo: float
    hi: float
    L: int
    beta: Optional[float] = None

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError("location a must be positive")
        if not (0.0 < self.w <= self.z):
            raise ValueError(f"need 0 < w <= z, got w={self.w}, z={self.z}")
        if self.lo > self.hi:
            raise ValueError(f"need lo <= hi, got lo={self.lo}, hi={self.hi}")
        if self.L < 1:
            raise ValueError("L must be a positive integer")
        if self.beta is not None and self.beta <= 1.0:
            raise ValueError("beta must exceed 1")

    @property
    def index_range(self) -> tuple[int, int]:
        return _index_range(self.L, self.w, self.z)

    def scale_exponent(self, alpha: float) -> float:
        return 1.0 / (1.0 - alpha) if self.beta is None else self.beta

    def c_interval(self, alpha: float) -> tuple[float, float]:
        beta = self.scale_exponent(alpha)
        centre = self.a / self.L
        x_lo = centre + self.lo / self.L**beta
        x_hi = centre + self.hi / self.L**beta
        if not (0.0 <= x_lo and x_hi <= 1.0):
            raise ValueError(f"rescaled c-interval ({x_lo}, {x_hi}) escapes (0, 1)")
        return x_lo, x_hi


def sample_point_set(model: CModel, K: int, rng) -> PointSet:
    """Sample the points of the limiting set with index ``k <= K``.

    Index 0 is always present; ``k >= 1`` is kept with probability
    ``(1 - c_k)**(k - 1)`` via one Bernoulli draw (no lifetimes are sampled).
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    rng = as_stream(rng)
    cs = np.atleast_1d(model.sample(rng, K + 1)).astype(float)
    ks = np.arange(K + 1)
    keep = np.ones(K + 1, dtype=bool)
    if K > 0:
        u = rng.uniform(K)
        keep[1:] = u < np.power(1.0 - cs[1:], ks[1:] - 1)
    return PointSet(ks[keep], cs[keep], K)


def truncation_tail(b: float, K: int) -> float:
    """Bound on the expected number of points above ``b`` with index > K: sum_{i>K} (1-b)^(i-1)."""
    return math.exp(K * math.log1p(-b)) / b


def _shared_counts(model, index_ranges, c_intervals, rng):
    # one realisation of the limiting set over the union of time windows;
    # each index carries one c and one survival event {G_l > l}
    rng = as_stream(rng)
    starts = [r[0] for r in index_ranges]
    stops = [r[1] for r in index_ranges]
    first, last = min(starts), max(stops)
    if last < first:
        return [0] * len(index_ranges)
    ls = np.arange(first, last + 1)
    cs = np.atleast_1d(model.sample(rng, ls.size)).astype(float)
    u = rng.uniform(ls.size)
    present = u < np.power(1.0 - cs, ls)
    counts = []
    for (i0, i1), (x_lo, x_hi) in zip(index_ranges, c_intervals):
        hit = present & (ls >= i0) & (ls <= i1) & (cs > x_lo) & (cs < x_hi)
        counts.append(int(np.count_nonzero(hit)))
    return counts


def _check_disjoint(intervals):
    order = sorted(range(len(intervals)), key=lambda i: intervals[i][0])
    for i, j in zip(order, order[1:]):
        # open intervals may share an endpoint; allow rounding at the contact
        if intervals[j][0] < intervals[i][1] * (1.0 - 1e-12):
            raise ValueError(
                f"rescaled c-intervals {intervals[i]} and {intervals[j]} overlap"
            )


def _check_uniform_model(model):
    if not (isinstance(model, Uniform) and model.a == 1.0):
        raise ValueError("uniform box counts require C uniform on (0, 1)")


def count_in_uniform_boxes(model: CModel, boxes: Sequence[UniformBox], rng) -> list[int]:
    """Joint counts of several uniform boxes from a single realisation."""
    _check_uniform_model(model)
    if len({b.L for b in boxes}) > 1:
        raise ValueError("boxes must share the same scale L")
    return _shared_counts(model, [b.index_range for b in boxes],
                          [b.c_interval for b in boxes], rng)


def count_in_uniform_box(model: CModel, box: UniformBox, rng) -> int:
    """Number of points with ``l`` in ``[Lw, Lz]`` and ``c`` in ``(lo/L, hi/L)``.

    Only the indices inside the time window are visited.
    """
    return count_in_uniform_boxes(model, [box], rng)[0]


def independence_counts(alpha: float, boxes: Sequence[PowerLawBox], rng) -> list[int]:
    """Joint counts for power-law boxes at distinct locations, shared ``c`` draws.

    Raises
    ------
    ValueError
        If locations repeat, scales differ, or rescaled c-intervals overlap.
    """
    if len({b.a for b in boxes}) != len(boxes):
        raise ValueError("box locations must be distinct")
    if len({b.L for b in boxes}) > 1:
        raise ValueError("boxes must share the same scale L")
    intervals = [b.c_interval(alpha) for b in boxes]
    _check_disjoint(intervals)
    return _shared_counts(PowerLaw(alpha), [b.index_range for b in boxes], intervals, rng)


def count_in_powerlaw_box(alpha: float, box: PowerLawBox, rng) -> int:
    return independence_counts(alpha, [box], rng)[0]


def min_separating_scale(locations: Sequence[float], lo: float, hi: float, beta: float) -> int:
    """Smallest integer ``L`` at which boxes ``a_i/L + (lo, hi)/L**beta`` cannot overlap.

    From ``L**(beta-1) * min|a_i - a_j| >= |hi| + |lo|``.
    """
    if beta <= 1.0:
        raise ValueError("beta must exceed 1")
    locs = sorted(locations)
    gap = min(b - a for a, b in zip(locs, locs[1:]))
    if gap <= 0:
        raise ValueError("locations must be distinct")
    return max(1, math.ceil(((abs(hi) + abs(lo)) / gap) ** (1.0 / (beta - 1.0))))


def intensity_uniform_box(box: UniformBox) -> float:
    """Limit intensity ``int_lo^hi int_w^z exp(-s y) ds dy`` of the box."""
    if box.w == box.z or box.lo == box.hi:
        return 0.0
    span = box.z - box.w

    def inner(y):
        # (e^{-yw} - e^{-yz}) / y, continuous at y = 0
        if y == 0.0:
            return span
        return math.exp(-y * box.w) * -math.expm1(-y * span) / y

    val, _ = integrate.quad(inner, box.lo, box.hi, epsabs=0.0, epsrel=1e-11, limit=200)
    return val


def intensity_powerlaw_box(alpha: float, box: PowerLawBox) -> float:
    """Limit intensity ``(hi - lo) (1-alpha) a^-alpha (e^{-aw} - e^{-az}) / a``."""
    a = box.a
    return ((box.hi - box.lo) * (1.0 - alpha) * a ** -alpha
            * (math.exp(-a * box.w) - math.exp(-a * box.z)) / a)


def prelimit_mean(model: CModel, index_range: tuple[int, int], c_interval: tuple[float, float]) -> float:
    """Exact ``sum_{l=l0..l1} int_{x0}^{x1} (1-x)^l f(x) dx`` at finite scale.

    The geometric sum is done analytically, leaving one integral of
    ``f(x) ((1-x)^l0 - (1-x)^(l1+1)) / x``.
    """
    l0, l1 = index_range
    x0, x1 = c_interval
    if l1 < l0 or x1 <= x0:
        return 0.0

    def g(x):
        lx = math.log1p(-x)
        return float(model.pdf(x)) * math.exp(l0 * lx) * -math.expm1((l1 + 1 - l0) * lx) / x

    val, _ = integrate.quad(g, x0, x1, epsabs=0.0, epsrel=1e-11, limit=200)
    return val


def prelimit_mean_uniform_box(box: UniformBox) -> float:
    return prelimit_mean(Uniform(1.0), box.index_range, box.c_interval)


def prelimit_mean_powerlaw_box(alpha: float, box: PowerLawBox) -> float:
    return prelimit_mean(PowerLaw(alpha), box.index_range, box.c_interval(alpha))

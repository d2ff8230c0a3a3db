"""Laws for the per-individual death probability ``C`` and the random streams.

Three variants are supported: :class:`Uniform` on ``(0, a)``, :class:`PowerLaw`
with density ``(1 - alpha) x**-alpha`` on ``(0, 1)`` and the point mass
:class:`Constant`. Sampling is by inverse CDF throughout, so every draw is a
deterministic function of a single uniform variate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = [
    "CModel",
    "Uniform",
    "PowerLaw",
    "Constant",
    "RngStream",
    "as_stream",
    "sample_c",
    "density",
    "mean_inverse",
    "survival_moment",
    "survival_moments",
    "sample_geometric",
    "geometric_from_uniform",
]

_QUAD_RTOL = 1e-10


class RngStream:
    """Seeded random stream addressed by ``(seed, stream_id)``.

    Streams with the same pair produce bit-identical sequences; distinct
    ``stream_id`` values are spawned children of one ``SeedSequence`` and are
    therefore statistically independent. The stream is stateful: successive
    calls advance it.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        if seed < 0 or stream_id < 0:
            raise ValueError("seed and stream_id must be non-negative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def uniform(self, size=None):
        """Uniform variates on the open interval (0, 1)."""
        u = self.generator.random(size)
        # random() is on [0, 1); exact zeros would break log/inverse-CDF maps
        if size is None:
            return u if u > 0.0 else 2.0**-54
        u[u == 0.0] = 2.0**-54
        return u


def as_stream(rng) -> RngStream:
    """Coerce an int seed or an :class:`RngStream` into a stream."""
    if isinstance(rng, RngStream):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng))
    raise TypeError(f"expected RngStream or int seed, got {type(rng).__name__}")


class CModel:
    """Base class for the law of the death probability."""

    has_density = True

    def ppf(self, u):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    def sample(self, rng, size=None):
        """Draw ``size`` values by pushing open-interval uniforms through :meth:`ppf`."""
        return self.ppf(as_stream(rng).uniform(size))

    def mean_inverse(self) -> float:
        raise NotImplementedError

    def survival_moments(self, ms) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(CModel):
    """C uniform on ``(0, a)`` with ``0 < a <= 1``."""

    a: float

    def __post_init__(self):
        if not (0.0 < self.a <= 1.0):
            raise ValueError(f"Uniform requires 0 < a <= 1, got a={self.a}")

    def ppf(self, u):
        return self.a * np.asarray(u, dtype=float)[()]

    def cdf(self, x):
        return np.clip(np.asarray(x, dtype=float) / self.a, 0.0, 1.0)[()]

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x > 0.0) & (x < self.a), 1.0 / self.a, 0.0)[()]

    def mean_inverse(self):
        return math.inf

    def survival_moments(self, ms):
        # (1 - (1-a)^(m+1)) / (a (m+1)), written with expm1/log1p for a near 0 or 1
        m1 = np.asarray(ms, dtype=float) + 1.0
        if self.a == 1.0:
            return 1.0 / m1
        return -np.expm1(m1 * math.log1p(-self.a)) / (self.a * m1)


@dataclass(frozen=True)
class PowerLaw(CModel):
    """Density ``(1 - alpha) x**(-alpha)`` on ``(0, 1)``, ``0 < alpha < 1``."""

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"PowerLaw requires 0 < alpha < 1, got alpha={self.alpha}")

    @property
    def beta(self) -> float:
        return 1.0 / (1.0 - self.alpha)

    def ppf(self, u):
        # CDF(x) = x^(1-alpha)
        return np.power(np.asarray(u, dtype=float), self.beta)[()]

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return np.power(x, 1.0 - self.alpha)[()]

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > 0.0) & (x < 1.0)
        safe = np.where(inside, x, 1.0)
        return np.where(inside, (1.0 - self.alpha) * safe ** (-self.alpha), 0.0)[()]

    def mean_inverse(self):
        # int_0^1 (1-alpha) x^(-alpha-1) dx diverges at 0
        return math.inf

    def survival_moments(self, ms):
        ms = np.atleast_1d(np.asarray(ms))
        return np.array([_powerlaw_moment(self.alpha, int(m)) for m in ms])


@dataclass(frozen=True)
class Constant(CModel):
    """Point mass at ``c`` with ``0 < c <= 1``."""

    c: float
    has_density = False

    def __post_init__(self):
        if not (0.0 < self.c <= 1.0):
            raise ValueError(f"Constant requires 0 < c <= 1, got c={self.c}")

    def ppf(self, u):
        return np.full(np.shape(u), self.c)[()]

    def cdf(self, x):
        return np.where(np.asarray(x, dtype=float) >= self.c, 1.0, 0.0)[()]

    def pdf(self, x):
        raise ValueError("Constant model has no density")

    def mean_inverse(self):
        return 1.0 / self.c

    def survival_moments(self, ms):
        return np.power(1.0 - self.c, np.asarray(ms, dtype=float))


def _powerlaw_moment(alpha: float, m: int) -> float:
    """E((1-C)^m) for the power law, by QUADPACK with the x^-alpha weight."""
    if m == 0:
        return 1.0
    coef = 1.0 - alpha
    # (1-x)^m lives within O(1/m) of the origin; past x = 60/(m+1) the
    # remaining mass is below exp(-59) relative, far under the tolerance
    cut = min(1.0, 60.0 / (m + 1))
    val, _ = integrate.quad(
        lambda x: coef * (1.0 - x) ** m, 0.0, cut,
        weight="alg", wvar=(-alpha, 0.0),
        epsabs=0.0, epsrel=_QUAD_RTOL, limit=200,
    )
    return val


def sample_c(model: CModel, rng) -> float:
    """Draw one death probability from ``model``."""
    return float(model.sample(rng))


def density(model: CModel, x):
    """Density of ``model`` at ``x`` (zero off the support).

    Raises
    ------
    ValueError
        For :class:`Constant`, which has no density.
    """
    return model.pdf(x)


def mean_inverse(model: CModel) -> float:
    """E(1/C); ``math.inf`` when the expectation diverges."""
    return model.mean_inverse()


def survival_moment(model: CModel, m: int) -> float:
    """E((1 - C)**m), the probability that an individual outlives ``m`` risk steps."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return float(model.survival_moments([m])[0])


def survival_moments(model: CModel, ms) -> np.ndarray:
    """Vectorised :func:`survival_moment` over an array of orders."""
    ms = np.asarray(ms)
    if np.any(ms < 0):
        raise ValueError("orders must be non-negative")
    return np.asarray(model.survival_moments(ms), dtype=float)


def geometric_from_uniform(c: float, u):
    """Inverse-CDF map for the geometric law on {1, 2, ...}.

    ``P(G >= m) = (1-c)**(m-1)``, so ``G = ceil(ln u / ln(1-c))`` (at least 1).
    """
    _check_geometric(c)
    u = np.asarray(u, dtype=float)
    if c == 1.0:
        return np.ones(u.shape, dtype=np.int64)[()]
    g = np.ceil(np.log(u) / math.log1p(-c))
    return np.maximum(g, 1).astype(np.int64)[()]


def sample_geometric(c: float, rng, size=None):
    """Geometric lifetime(s) with success probability ``c`` on {1, 2, ...}."""
    _check_geometric(c)
    g = geometric_from_uniform(c, as_stream(rng).uniform(size))
    return int(g) if size is None else g


def _check_geometric(c):
    if not (0.0 < c <= 1.0):
        raise ValueError(f"geometric parameter must satisfy 0 < c <= 1, got {c}")

"""Exact expectations, variances and the survival dichotomy."""
from __future__ import annotations

import enum
import math

import numpy as np
from scipy import integrate

from .distributions import CModel, Constant, PowerLaw, Uniform, survival_moments

__all__ = [
    "SurvivalClass",
    "expected_size",
    "expected_size_uniform",
    "variance_size",
    "classify",
    "growth_ratio",
    "tail_count_bound",
]


class SurvivalClass(enum.Enum):
    DivergesInProbability = "diverges"
    ConvergesInDistribution = "converges"


def _alive_probabilities(n: int, model: CModel) -> np.ndarray:
    # P(G_k >= k) for k = 1..n
    return survival_moments(model, np.arange(n))


def expected_size(n: int, model: CModel) -> float:
    """E|A_n| = 1 + sum_{k=1..n} E((1-C)^(k-1)).

    For the power law the sum is evaluated as the single integral
    ``1 + E((1 - (1-C)^n) / C)`` so large ``n`` does not cost ``n`` quadratures.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1.0
    if isinstance(model, PowerLaw):
        return 1.0 + _powerlaw_partial_inverse(model.alpha, n)
    return 1.0 + math.fsum(_alive_probabilities(n, model))


def _powerlaw_partial_inverse(alpha: float, n: int) -> float:
    coef = 1.0 - alpha

    def g(x):
        # (1 - (1-x)^n) / x, finite (-> n) at the origin
        return coef * -math.expm1(n * math.log1p(-x)) / x if x > 0 else coef * n

    cut = min(1.0, 60.0 / n)
    head, _ = integrate.quad(g, 0.0, cut, weight="alg", wvar=(-alpha, 0.0),
                             epsabs=0.0, epsrel=1e-10, limit=200)
    if cut < 1.0:
        # here (1-x)^n is negligible and the integrand is (1-alpha) x^(-alpha-1)
        head += coef / alpha * (cut ** -alpha - 1.0)
    return head


def expected_size_uniform(n: int, a: float) -> float:
    """Harmonic-sum form of E|A_n| for C uniform on (0, a)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 < a < 1.0):
        raise ValueError("a must lie in (0, 1)")
    k = np.arange(1, n + 1, dtype=float)
    harmonic = math.fsum(1.0 / k)
    damped = math.fsum(np.exp(k * math.log1p(-a)) / k)
    return 1.0 + (harmonic - damped) / a


def variance_size(n: int, model: CModel) -> float:
    """Var|A_n| as a sum of independent Bernoulli variances."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0.0
    p = _alive_probabilities(n, model)
    return math.fsum(p * (1.0 - p))


def classify(model: CModel) -> SurvivalClass:
    if math.isinf(model.mean_inverse()):
        return SurvivalClass.DivergesInProbability
    return SurvivalClass.ConvergesInDistribution


def growth_ratio(n: int, a: float) -> float:
    """E|A_n| divided by its logarithmic growth scale ``ln(n) / a``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return expected_size_uniform(n, a) / (math.log(n) / a)


def tail_count_bound(model: CModel, b: float) -> float:
    """Expected number of indices ``i >= 1`` with ``G_i >= i`` and ``c_i > b``.

    Equals ``int_b^1 f(x) / x dx``, which never exceeds ``1 / b``.
    """
    if not (0.0 < b < 1.0):
        raise ValueError("b must lie in (0, 1)")
    if isinstance(model, Constant):
        raise ValueError("Constant model has no density")
    if isinstance(model, Uniform):
        return math.log(model.a / b) / model.a if b < model.a else 0.0
    if isinstance(model, PowerLaw):
        al = model.alpha
        return (1.0 - al) / al * (b ** -al - 1.0)
    val, _ = integrate.quad(lambda x: model.pdf(x) / x, b, 1.0, epsabs=0.0, epsrel=1e-10)
    return val

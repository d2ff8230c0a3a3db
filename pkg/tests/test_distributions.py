import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from hetpop.distributions import (
    Constant, PowerLaw, RngStream, Uniform,
    density, geometric_from_uniform, mean_inverse, sample_c, sample_geometric,
    survival_moment, survival_moments,
)

MODELS = [Uniform(0.01), Uniform(0.5), Uniform(1.0), PowerLaw(0.1), PowerLaw(0.5), PowerLaw(0.9),
          Constant(0.5), Constant(1.0)]


def test_sample_c_constant_is_point_mass():
    assert sample_c(Constant(0.5), RngStream(1)) == 0.5


def test_sample_c_uniform_support():
    rng = RngStream(3)
    xs = [sample_c(Uniform(0.01), rng) for _ in range(1000)]
    assert all(0.0 < x < 0.01 for x in xs)


def test_powerlaw_inverse_cdf_by_hand():
    # CDF(x) = sqrt(x) for alpha = 1/2, so u = 0.25 maps to 0.0625
    assert PowerLaw(0.5).ppf(0.25) == pytest.approx(0.0625, rel=1e-15)


def test_density_values():
    assert density(Uniform(0.5), 0.2) == 2.0
    assert density(PowerLaw(0.5), 0.25) == pytest.approx(1.0)
    assert density(Uniform(0.5), 0.7) == 0.0
    with pytest.raises(ValueError, match="no density"):
        density(Constant(0.5), 0.3)


@pytest.mark.parametrize("model", [Uniform(0.01), Uniform(0.3), Uniform(1.0), PowerLaw(0.2), PowerLaw(0.8)])
def test_density_integrates_to_one(model):
    top = getattr(model, "a", 1.0)
    if isinstance(model, PowerLaw):
        val, _ = integrate.quad(lambda x: 1.0 - model.alpha, 0, 1, weight="alg", wvar=(-model.alpha, 0),
                                epsabs=0, epsrel=1e-12)
    else:
        val, _ = integrate.quad(model.pdf, 0, top, epsabs=0, epsrel=1e-12)
    assert abs(val - 1.0) < 1e-9


def test_mean_inverse():
    for a in (0.01, 0.5, 1.0):
        assert mean_inverse(Uniform(a)) == math.inf
    assert mean_inverse(Constant(0.5)) == 2.0
    assert mean_inverse(PowerLaw(0.5)) == math.inf


def test_powerlaw_mean_inverse_diverges_numerically():
    # int_eps^1 0.5 x^-1.5 dx = 1/sqrt(eps) - 1 keeps growing as eps -> 0;
    # integrate in t = ln x where the integrand is 0.5 exp(-t/2)
    partial = [integrate.quad(lambda t: 0.5 * math.exp(-0.5 * t), math.log(eps), 0)[0]
               for eps in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(b > 5 * a for a, b in zip(partial, partial[1:]))
    assert partial[-1] > 9000


def test_survival_moment_examples():
    for model in MODELS:
        assert survival_moment(model, 0) == 1.0
    assert survival_moment(Constant(0.5), 2) == 0.25
    assert survival_moment(Uniform(0.5), 1) == pytest.approx(0.75, rel=1e-14)


@pytest.mark.parametrize("a", [0.01, 0.1, 0.5, 0.99, 1.0])
@pytest.mark.parametrize("m", [0, 1, 2, 7, 50, 400])
def test_uniform_moment_matches_quadrature(a, m):
    val, _ = integrate.quad(lambda x: (1 - x) ** m / a, 0, a, epsabs=0, epsrel=1e-13, limit=200)
    assert survival_moment(Uniform(a), m) == pytest.approx(val, rel=1e-10)


@pytest.mark.parametrize("alpha", [0.01, 0.1, 0.5, 0.9, 0.99])
@pytest.mark.parametrize("m", [1, 2, 3, 10, 59, 60, 61, 100, 1000, 10**4, 10**5, 10**6])
def test_powerlaw_moment_matches_beta_function(alpha, m):
    mpmath.mp.dps = 30
    exact = (1 - mpmath.mpf(alpha)) * mpmath.beta(1 - mpmath.mpf(alpha), m + 1)
    assert survival_moment(PowerLaw(alpha), m) == pytest.approx(float(exact), rel=1e-10)


@pytest.mark.parametrize("model", MODELS)
def test_survival_moment_decreasing_in_m(model):
    vals = survival_moments(model, np.arange(0, 200))
    assert np.all(np.diff(vals) <= 0)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.001, 1.0), m=st.integers(0, 5000))
def test_uniform_moment_monotone_property(a, m):
    model = Uniform(a)
    assert survival_moment(model, m + 1) <= survival_moment(model, m) <= 1.0


@pytest.mark.parametrize("model", [Uniform(0.01), Uniform(0.7), PowerLaw(0.3), PowerLaw(0.9)])
def test_empirical_cdf_matches(model):
    xs = np.sort(model.sample(RngStream(11, 4), 10**5))
    n = xs.size
    F = model.cdf(xs)
    ks = max(np.max(np.arange(1, n + 1) / n - F), np.max(F - np.arange(n) / n))
    assert ks < 0.01


def test_geometric_inverse_cdf_examples():
    assert geometric_from_uniform(0.5, 0.3) == 2
    assert geometric_from_uniform(1.0, 0.3) == 1
    rng = RngStream(5)
    assert all(sample_geometric(1.0, rng) == 1 for _ in range(100))


def test_geometric_mean():
    g = sample_geometric(0.25, RngStream(2024), size=10**5)
    se = g.std(ddof=1) / math.sqrt(g.size)
    assert abs(g.mean() - 4.0) < 3 * se


@pytest.mark.parametrize("c", [0.1, 0.5])
def test_geometric_tail(c):
    g = sample_geometric(c, RngStream(77), size=10**5)
    for m in (1, 2, 5, 10):
        p = (1 - c) ** (m - 1)
        emp = np.mean(g >= m)
        se = math.sqrt(p * (1 - p) / g.size)
        assert abs(emp - p) <= 3 * se + 1e-12


def test_geometric_rejects_bad_parameter():
    for c in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            sample_geometric(c, RngStream(0))


def test_model_validation():
    with pytest.raises(ValueError):
        Uniform(0.0)
    with pytest.raises(ValueError):
        Uniform(1.2)
    with pytest.raises(ValueError):
        PowerLaw(1.0)
    with pytest.raises(ValueError):
        Constant(0.0)


def test_stream_reproducible_and_distinct():
    a = RngStream(9, 3).uniform(50)
    b = RngStream(9, 3).uniform(50)
    c = RngStream(9, 4).uniform(50)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all((a > 0) & (a < 1))


def test_independent_streams_uncorrelated():
    x = RngStream(1, 0).uniform(10**5)
    y = RngStream(1, 1).uniform(10**5)
    assert abs(np.corrcoef(x, y)[0, 1]) < 3 / math.sqrt(10**5)

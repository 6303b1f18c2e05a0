import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, stats

from risisl.fading import (
    RicianConfig,
    ScintillationRegime,
    laguerre_half,
    rician_mean_and_ms,
    rician_pdf,
    sample_rician,
    scintillation_regime,
)

K_GRID = (0.0, 0.5, 1.0, 3.0, 7.0, 10.0, 50.0)


def _quad_moment(K, n):
    cfg = RicianConfig(K)
    val, _ = integrate.quad(lambda a: a**n * rician_pdf(cfg, a), 0, 5, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


@pytest.mark.parametrize("K", K_GRID)
def test_mean_identity_vs_quadrature(K):
    mean, ms = rician_mean_and_ms(RicianConfig(K))
    assert mean == pytest.approx(_quad_moment(K, 1), abs=1e-9)
    assert ms == pytest.approx(_quad_moment(K, 2), abs=1e-9)


@pytest.mark.parametrize("K", K_GRID)
def test_pdf_matches_scipy_rice(K):
    cfg = RicianConfig(K)
    nu, s = cfg.los_amplitude, cfg.scatter_sigma
    a = np.linspace(0.01, 3, 50)
    np.testing.assert_allclose(rician_pdf(cfg, a), stats.rice.pdf(a / s, nu / s) / s, rtol=1e-10)


def test_laguerre_values():
    assert laguerre_half(0.0) == 1.0
    for x in (-0.5, -3.0, -10.0, -50.0):
        assert laguerre_half(x) == pytest.approx(float(mpmath.laguerre(0.5, 0, x)), rel=1e-12)
    assert 0.99 <= laguerre_half(-100.0) / math.sqrt(400 / math.pi) <= 1.01
    with pytest.raises(ValueError):
        laguerre_half(0.5)


def test_rayleigh_mean_at_K0():
    assert rician_mean_and_ms(RicianConfig(0.0))[0] == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-15)


def test_los_limit():
    mean, ms = rician_mean_and_ms(RicianConfig(1e8))
    assert mean == pytest.approx(1.0, abs=1e-8)
    assert ms - mean**2 < 1e-8


@given(st.floats(0.0, 1e4))
def test_jensen(K):
    mean, ms = rician_mean_and_ms(RicianConfig(K))
    assert mean**2 <= ms + 1e-15


def test_sampler_moments():
    rng = np.random.default_rng(11)
    for K in (0.0, 10.0):
        x = sample_rician(RicianConfig(K), rng, 1_000_000)
        mean, _ = rician_mean_and_ms(RicianConfig(K))
        se = x.std() / 1000.0
        assert abs(x.mean() - mean) < 3 * se
        se2 = (x**2).std() / 1000.0
        assert abs((x**2).mean() - 1.0) < 3 * se2


def test_sampler_chi_square_gof():
    cfg = RicianConfig(10.0)
    x = sample_rician(cfg, np.random.default_rng(2024), 1_000_000)
    nu, s = cfg.los_amplitude, cfg.scatter_sigma
    # 50 equiprobable bins from the analytic quantiles
    edges = stats.rice.ppf(np.linspace(0, 1, 51), nu / s) * s
    observed, _ = np.histogram(x, edges)
    expected = np.full(50, x.size / 50)
    _, p = stats.chisquare(observed, expected)
    assert p > 0.01


@pytest.mark.parametrize("K,regime", [
    (10.0, ScintillationRegime.WEAK),
    (7.0, ScintillationRegime.WEAK),
    (6.999, ScintillationRegime.TRANSITION),
    (3.0, ScintillationRegime.TRANSITION),
    (0.0, ScintillationRegime.STRONG),
])
def test_regimes(K, regime):
    assert scintillation_regime(K) is regime


def test_invalid_K():
    with pytest.raises(ValueError):
        RicianConfig(-1.0)
    with pytest.raises(ValueError):
        scintillation_regime(-0.1)

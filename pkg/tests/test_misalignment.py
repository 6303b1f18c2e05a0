import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, stats

from risisl.constellation import distance_set, preset
from risisl.misalignment import (
    AntennaConfig,
    MisalignmentParams,
    effective_aperture_radius,
    footprint_radius,
    misalignment_cdf,
    misalignment_coefficient,
    misalignment_moment,
    misalignment_params,
    misalignment_pdf,
    sample_misalignment,
)

ANT = AntennaConfig()
D_INTRA_STARLINK = distance_set(preset("starlink")).d_intra_km * 1e3


def _params(k2, a0):
    # synthetic parameter set with the requested (kappa^2, A0)
    kappa = math.sqrt(k2)
    return MisalignmentParams(jitter_variance_m2=1.0, A0=a0, w_eq_m=math.sqrt(2 * kappa),
                              kappa=kappa, r_a_m=0.01, r_d_m=1.0)


GRID = [(k2, a0) for k2 in (0.5, 1, 2, 10, 100) for a0 in (0.1, 0.5, 0.99)]


def test_effective_aperture():
    lam = 2.99792458e8 / 350e9
    assert effective_aperture_radius(ANT) == pytest.approx(lam / (2 * math.pi) * math.sqrt(1000), rel=1e-15)
    assert effective_aperture_radius(ANT) == pytest.approx(4.3109e-3, rel=1e-4)
    assert effective_aperture_radius(AntennaConfig(gain_dBi=0.0)) == pytest.approx(lam / (2 * math.pi), rel=1e-15)
    doubled = effective_aperture_radius(AntennaConfig(carrier_frequency_Hz=700e9))
    assert doubled == pytest.approx(effective_aperture_radius(ANT) / 2, rel=1e-14)


def test_footprint_radius_far_field():
    r_a = effective_aperture_radius(ANT)
    r_d = footprint_radius(ANT, 945.4e3)
    assert r_d == pytest.approx(945.4e3 * ANT.wavelength_m / (math.pi * r_a), rel=1e-6)
    assert footprint_radius(ANT, 1e-9) == pytest.approx(r_a, rel=1e-12)
    with pytest.raises(ValueError):
        footprint_radius(ANT, 0.0)


@given(st.floats(1.0, 1e7), st.floats(1.0, 1e7))
def test_footprint_monotone(d1, d2):
    if d1 < d2:
        assert footprint_radius(ANT, d1) < footprint_radius(ANT, d2)


def test_a0_equals_square_aperture_integral():
    r_d = 2e-2
    p = misalignment_params(ANT, 1e3, 1.0, r_d_m=r_d)
    r_a = p.r_a_m
    half = math.sqrt(math.pi) * r_a / 2  # equal-area square
    val, _ = integrate.dblquad(lambda y, x: 2 / (math.pi * r_d**2) * math.exp(-2 * (x * x + y * y) / r_d**2),
                               -half, half, -half, half, epsabs=1e-14, epsrel=1e-12)
    assert p.A0 == pytest.approx(val, rel=1e-9)
    circle = 1 - math.exp(-2 * r_a**2 / r_d**2)
    assert p.A0 == pytest.approx(circle, rel=0.05)


def test_a0_limits():
    assert misalignment_params(ANT, 1e3, 1.0, r_d_m=1e-6).A0 == pytest.approx(1.0, abs=1e-12)
    p = misalignment_params(ANT, 1e3, 1.0, r_d_m=100.0)
    assert p.A0 == pytest.approx(2 * p.r_a_m**2 / p.r_d_m**2, rel=1e-6)


def test_weq_high_precision():
    for r_d in (2.5, 0.1, 5e4):
        p = misalignment_params(ANT, 1e3, 1.0, r_d_m=r_d)
        mpmath.mp.dps = 40
        r_a = mpmath.mpf(p.r_a_m)
        v = mpmath.sqrt(mpmath.pi) * r_a / (mpmath.sqrt(2) * r_d)
        w2 = r_d**2 * mpmath.erf(v) / ((mpmath.sqrt(2) * r_a / r_d) * mpmath.exp(-v * v))
        assert p.w_eq_m == pytest.approx(float(mpmath.sqrt(w2)), rel=1e-13)
        assert p.kappa == pytest.approx(p.w_eq_m**2 / 2.0, rel=1e-15)


def test_regression_triple_fixed_footprint():
    p = misalignment_params(ANT, D_INTRA_STARLINK, 1.0, r_d_m=2.5)
    # small-aperture series: A0 ~ 2 r_a^2 / r_d^2, w_eq ~ r_d
    assert p.A0 == pytest.approx(2 * p.r_a_m**2 / 2.5**2, rel=1e-5)
    assert p.w_eq_m == pytest.approx(2.5, rel=2e-6)
    assert p.kappa_sq == pytest.approx((2.5**2 / 2) ** 2, rel=1e-5)
    # fixed footprint: the distance does not enter
    q = misalignment_params(ANT, 4e6, 1.0, r_d_m=2.5)
    assert (q.A0, q.kappa) == (p.A0, p.kappa)


def test_gaussian_footprint_makes_jitter_negligible():
    p = misalignment_params(ANT, D_INTRA_STARLINK, 10.0)
    assert p.r_d_m == pytest.approx(footprint_radius(ANT, D_INTRA_STARLINK))
    assert p.kappa > 1e8


@given(st.floats(2e3, 1e7), st.floats(2e3, 1e7))
def test_a0_decreasing_in_distance(d1, d2):
    if d1 < d2:
        a = misalignment_params(ANT, d1, 1.0).A0
        b = misalignment_params(ANT, d2, 1.0).A0
        assert b < a


def test_invalid_inputs():
    with pytest.raises(ValueError):
        misalignment_params(ANT, 1e3, -1.0)
    with pytest.raises(ValueError):
        misalignment_params(ANT, -5.0, 1.0)
    with pytest.warns(UserWarning, match="below 1 m"):
        misalignment_params(ANT, 1e3, 0.5, r_d_m=2.5)


def test_perfect_pointing():
    p = misalignment_params(ANT, 1e3, 0.0, r_d_m=2.5)
    assert math.isinf(p.kappa)
    assert misalignment_moment(p, 1) == p.A0
    assert np.all(sample_misalignment(p, np.random.default_rng(0), 10) == p.A0)
    with pytest.raises(ValueError):
        misalignment_pdf(p, 0.5 * p.A0)


def test_coefficient_values():
    p = _params(4.0, 0.3)
    assert misalignment_coefficient(p, 0.0) == 0.3
    assert misalignment_coefficient(p, p.w_eq_m / math.sqrt(2)) == pytest.approx(0.3 / math.e, rel=1e-15)
    assert misalignment_coefficient(p, 3 * p.w_eq_m) == pytest.approx(0.3 * math.exp(-18), rel=1e-14)
    with pytest.raises(ValueError):
        misalignment_coefficient(p, -1.0)


@pytest.mark.parametrize("k2,a0", GRID)
def test_pdf_normalisation_and_moments(k2, a0):
    p = _params(k2, a0)
    f = lambda y: misalignment_pdf(p, y)
    norm, _ = integrate.quad(f, 0, a0, epsabs=1e-13, epsrel=1e-12, limit=400)
    m1, _ = integrate.quad(lambda y: y * f(y), 0, a0, epsabs=1e-13, epsrel=1e-12, limit=400)
    m2, _ = integrate.quad(lambda y: y * y * f(y), 0, a0, epsabs=1e-13, epsrel=1e-12, limit=400)
    assert norm == pytest.approx(1.0, abs=1e-9)
    assert m1 == pytest.approx(misalignment_moment(p, 1), abs=1e-9)
    assert m2 == pytest.approx(misalignment_moment(p, 2), abs=1e-9)


def test_pdf_uniform_at_unit_exponent():
    p = _params(1.0, 0.4)
    np.testing.assert_allclose(misalignment_pdf(p, np.array([0.01, 0.2, 0.4])), 1 / 0.4, rtol=1e-14)
    assert misalignment_pdf(p, 0.41) == 0.0
    assert misalignment_pdf(p, -0.1) == 0.0


def test_sampler_ks_and_mean():
    p = _params(2.5, 0.7)
    x = sample_misalignment(p, np.random.default_rng(5), 1_000_000)
    ks = stats.kstest(x, lambda y: misalignment_cdf(p, y)).statistic
    assert ks < 0.002
    se = x.std() / 1000
    assert abs(x.mean() - misalignment_moment(p, 1)) < 3 * se
    assert x.min() > 0 and x.max() <= 0.7


def test_rayleigh_route_matches_law():
    p = _params(2.5, 0.7)
    x = sample_misalignment(p, np.random.default_rng(6), 200_000, method="rayleigh")
    assert stats.kstest(x, lambda y: misalignment_cdf(p, y)).statistic < 0.005
    with pytest.raises(ValueError):
        sample_misalignment(p, np.random.default_rng(0), 3, method="bogus")


@given(st.floats(0.0, 50.0), st.floats(0.0, 50.0))
def test_coefficient_monotone(r1, r2):
    p = _params(3.0, 0.5)
    if r1 < r2:
        assert misalignment_coefficient(p, r2) <= misalignment_coefficient(p, r1)

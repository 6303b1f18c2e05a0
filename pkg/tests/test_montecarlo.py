import math
import warnings

import numpy as np
import pytest

from risisl.constellation import distance_set, preset
from risisl.fading import RicianConfig
from risisl.link import LinkBudget, SnrBudget, amplitude_stats_single, bpsk_conditional_error, free_space_path_loss
from risisl.misalignment import AntennaConfig, misalignment_params
from risisl.montecarlo import (
    McConfig,
    amplitude_samples,
    draw_aggregate_amplitude,
    empirical_amplitude_stats,
    semi_analytic_ber,
    semi_analytic_ber_many,
)
from risisl.multi_ris import ConsecutiveTopology, RisBranch, SimultaneousTopology, SingleTopology

ANT = AntennaConfig()
D = distance_set(preset("starlink")).d_intra_km * 1e3


def _single(n=256, jitter=1.0, K=10.0, r_d=2.5):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mis = misalignment_params(ANT, D, jitter, r_d_m=r_d)
    return SingleTopology(LinkBudget(D, D, n, ANT), mis, RicianConfig(K))


def test_deterministic_limit():
    t = _single(n=512, jitter=0.0, K=1e30, r_d=1e-9)
    a = amplitude_samples(t, McConfig(trials=3000, seed=1))
    expected = 512 * math.sqrt(free_space_path_loss(t.link))
    np.testing.assert_allclose(a, expected, rtol=1e-12)


def test_deterministic_ber_has_zero_spread():
    t = _single(n=512, jitter=0.0, K=1e30, r_d=1e-9)
    a = 512 * math.sqrt(free_space_path_loss(t.link))
    snr = SnrBudget(10 * math.log10(5.0 / a**2))
    est = semi_analytic_ber(t, snr, McConfig(trials=5000, seed=2))
    assert est.value > 1e-4
    assert est.value == pytest.approx(bpsk_conditional_error(a * a * snr.linear), rel=1e-12)
    # K = 1e30 leaves ulp-level scatter in each factor
    assert est.std_error < 1e-14 * est.value
    assert est.trials_used == 5000


def test_draw_is_nonnegative():
    rng = np.random.default_rng(0)
    assert draw_aggregate_amplitude(_single(), rng) >= 0
    assert np.all(draw_aggregate_amplitude(_single(jitter=10.0), rng, 100) >= 0)
    chain = ConsecutiveTopology(2, 3, 1.0)
    assert np.all(draw_aggregate_amplitude(chain, rng, 100) > 0)


def test_empirical_stats_match_closed_form_n1024():
    t = _single(n=1024)
    emp = empirical_amplitude_stats(t, McConfig(trials=100_000, seed=3))
    ref = amplitude_stats_single(t.link, t.misalignment, t.rician)
    assert abs(emp.stats.mean - ref.mean) < 3 * emp.mean_std_error
    assert abs(emp.stats.variance - ref.variance) < 3 * emp.variance_std_error


def test_simultaneous_equals_single_double_n():
    s = _single(n=128)
    sim = SimultaneousTopology((RisBranch(s.link, s.misalignment, s.misalignment),) * 2, s.rician)
    big = SingleTopology(LinkBudget(D, D, 256, ANT), s.misalignment, s.rician)
    mc = McConfig(trials=4000, seed=9)
    np.testing.assert_allclose(amplitude_samples(sim, mc), amplitude_samples(big, mc), rtol=1e-12)


@pytest.mark.parametrize("variant", [
    dict(workers=1, batch_size=1024),
    dict(workers=3, batch_size=1024),
    dict(workers=2, batch_size=5000),
    dict(workers=1, batch_size=1 << 20),
])
def test_determinism_across_schedules(variant):
    t = _single(n=256, jitter=10.0)
    snrs = [530.0, 545.0, 560.0]
    ref = semi_analytic_ber(t, snrs, McConfig(trials=20_000, seed=42))
    got = semi_analytic_ber(t, snrs, McConfig(trials=20_000, seed=42, **variant))
    assert got == ref


@pytest.mark.filterwarnings("ignore:MC BER")
def test_batched_topologies_match_solo_runs():
    mc = McConfig(trials=6000, seed=4)
    ts = [_single(jitter=1.0), _single(jitter=10.0)]
    snrs = [500.0, 510.0, 540.0]
    many = semi_analytic_ber_many(ts, snrs, mc)
    for t, est in zip(ts, many):
        assert est == semi_analytic_ber(t, snrs, mc)


def test_mixed_layouts_rejected():
    with pytest.raises(ValueError, match="layout"):
        semi_analytic_ber_many([_single(n=64), _single(n=128)], 500.0, McConfig(trials=10))


def test_seed_changes_draws():
    a = amplitude_samples(_single(n=64), McConfig(trials=50, seed=1))
    b = amplitude_samples(_single(n=64), McConfig(trials=50, seed=2))
    assert not np.array_equal(a, b)


def test_std_error_scales_as_inverse_sqrt():
    t = _single(n=64, jitter=10.0)
    snr = SnrBudget(560.0)
    se = [semi_analytic_ber(t, snr, McConfig(trials=n, seed=5)).std_error for n in (10_000, 100_000, 1_000_000)]
    assert se[0] / se[1] == pytest.approx(math.sqrt(10), rel=0.2)
    assert se[1] / se[2] == pytest.approx(math.sqrt(10), rel=0.2)


def test_tail_warning():
    with pytest.warns(UserWarning, match="10/trials"):
        semi_analytic_ber(_single(n=256), SnrBudget(520.0), McConfig(trials=1000))


def test_estimate_bounds():
    est = semi_analytic_ber(_single(), [400.0, 500.0], McConfig(trials=2000))
    for e in est:
        assert 0 <= e.value <= 0.5 and e.std_error >= 0


@pytest.mark.parametrize("kw", [dict(trials=0), dict(batch_size=0), dict(seed=-1), dict(seed=2**64), dict(workers=0)])
def test_config_guards(kw):
    with pytest.raises(ValueError):
        McConfig(**kw)

"""Single-RIS link statistics and BPSK error probability.

The aggregate amplitude ``A`` of an ``N``-element RIS is treated as Gaussian
(CLT) with moments built from per-element Rician and misalignment moments.
The maximum SNR ``gamma = A^2 * Pt/N0`` is then non-central chi-square with
one degree of freedom, and BPSK error probability follows from its MGF
through the Craig-form integral over ``[0, pi/2]``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfc, erfcinv

from risisl.fading import RicianConfig, rician_mean_and_ms
from risisl.misalignment import AntennaConfig, MisalignmentParams, shape_ratio
from risisl.quadrature import adaptive_gauss_legendre

BOLTZMANN = 1.380649e-23
CLT_MIN_ELEMENTS = 64


@dataclass(frozen=True)
class LinkBudget:
    d_SR_m: float
    d_RD_m: float
    ris_elements: int
    antenna: AntennaConfig = field(default_factory=AntennaConfig)
    ris_efficiency: float = 1.0

    def __post_init__(self):
        if not (self.d_SR_m > 0 and self.d_RD_m > 0):
            raise ValueError("hop distances must be > 0")
        if not 0 < self.ris_efficiency <= 1:
            raise ValueError(f"ris_efficiency must lie in (0, 1], got {self.ris_efficiency}")
        if int(self.ris_elements) != self.ris_elements or self.ris_elements < 1:
            raise ValueError(f"ris_elements must be a positive integer, got {self.ris_elements}")


@dataclass(frozen=True)
class AmplitudeStats:
    mean: float
    variance: float

    def __post_init__(self):
        if not self.mean >= 0:
            raise ValueError(f"mean must be >= 0, got {self.mean}")
        if not self.variance >= 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")

    @property
    def second_moment(self) -> float:
        return self.mean**2 + self.variance


@dataclass(frozen=True)
class SnrBudget:
    pt_over_n0_dB: float

    def __post_init__(self):
        if not math.isfinite(self.pt_over_n0_dB):
            raise ValueError(f"pt_over_n0_dB must be finite, got {self.pt_over_n0_dB}")

    @property
    def linear(self) -> float:
        return 10.0 ** (self.pt_over_n0_dB / 10.0)

    @classmethod
    def from_thermal(cls, pt_dBW: float, bandwidth_Hz: float, noise_temperature_K: float):
        """Transmit power over thermal noise ``k_B T B``."""
        noise_W = BOLTZMANN * noise_temperature_K * bandwidth_Hz
        return cls(pt_dBW - 10.0 * math.log10(noise_W))


def free_space_path_loss(lb: LinkBudget) -> float:
    lam = lb.antenna.wavelength_m
    g = lb.antenna.gain_linear
    return (lam / (4.0 * math.pi)) ** 4 * g * g / (lb.d_SR_m**2 * lb.d_RD_m**2) * lb.ris_efficiency


def element_moments(ric: RicianConfig, mis_sr: MisalignmentParams,
                    mis_rd: MisalignmentParams | None = None) -> tuple[float, float]:
    """First and second moment of one reflected element
    ``alpha_SR * alpha_RD * zeta_SR * zeta_RD``."""
    mis_rd = mis_sr if mis_rd is None else mis_rd
    mean_alpha, ms_alpha = rician_mean_and_ms(ric)
    m1 = mean_alpha**2
    m2 = ms_alpha**2
    for p in (mis_sr, mis_rd):
        m1 *= shape_ratio(p.kappa_sq, 1) * p.A0
        m2 *= shape_ratio(p.kappa_sq, 2) * p.A0**2
    return m1, m2


def element_variance(m1: float, m2: float) -> float:
    v = m2 - m1 * m1
    # exact zero in the deterministic limit can come out as -ulp
    if v < 0 and -v <= 1e-12 * m2:
        v = 0.0
    return v


def amplitude_stats_single(lb: LinkBudget, mis: MisalignmentParams, ric: RicianConfig) -> AmplitudeStats:
    """Mean and variance of the aggregate amplitude for one RIS."""
    n = lb.ris_elements
    if n < CLT_MIN_ELEMENTS:
        warnings.warn(f"N={n} elements is small for the Gaussian amplitude approximation",
                      stacklevel=2)
    pl = free_space_path_loss(lb)
    m1, m2 = element_moments(ric, mis)
    return AmplitudeStats(mean=n * math.sqrt(pl) * m1, variance=n * pl * element_variance(m1, m2))


def snr_mgf(stats: AmplitudeStats, snr: SnrBudget, s):
    """MGF of ``A^2 * Pt/N0`` for Gaussian ``A``; defined here for ``s <= 0``."""
    s = np.asarray(s, dtype=float)
    if np.any(s > 0):
        raise ValueError("snr_mgf requires s <= 0")
    c = snr.linear
    den = 1.0 - 2.0 * s * c * stats.variance
    out = np.exp(s * c * stats.mean**2 / den) / np.sqrt(den)
    return out if out.ndim else float(out)


def _craig_integrand(mean_sq_c: float, two_var_c: float):
    def f(w):
        t = np.sin(w) ** 2
        den = t + two_var_c
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.exp(-mean_sq_c / den) * np.sqrt(t / den)
        return np.where(den > 0, val, 0.0)
    return f


def bpsk_ber(stats: AmplitudeStats, snr: SnrBudget, order: int = 64, rtol: float = 1e-10) -> float:
    """BPSK error probability ``(1/pi) * int_0^{pi/2} M(-1/sin^2 w) dw``."""
    c = snr.linear
    try:
        mean_sq_c = c * stats.mean**2
        two_var_c = 2.0 * c * stats.variance
    except OverflowError:
        mean_sq_c = two_var_c = math.inf
    if not (math.isfinite(mean_sq_c) and math.isfinite(two_var_c)):
        raise OverflowError(
            f"E[A]^2 Pt/N0 overflows a double (E[A]={stats.mean:.3e}, Pt/N0={snr.pt_over_n0_dB:g} dB)"
        )
    f = _craig_integrand(mean_sq_c, two_var_c)
    return adaptive_gauss_legendre(f, 0.0, math.pi / 2.0, rtol=rtol, order=order) / math.pi


bpsk_ber_single = bpsk_ber


def bpsk_conditional_error(gamma):
    """Exact BPSK error ``Q(sqrt(2 gamma))`` at instantaneous SNR ``gamma``."""
    out = 0.5 * erfc(np.sqrt(gamma))
    return out if np.ndim(out) else float(out)


def required_pt_over_n0_dB(stats: AmplitudeStats, target_pe: float, xtol: float = 1e-9) -> float:
    """Smallest ``Pt/N0`` (dB) at which :func:`bpsk_ber` reaches ``target_pe``."""
    if not 0 < target_pe < 0.5:
        raise ValueError(f"target_pe must lie in (0, 0.5), got {target_pe}")
    if stats.second_moment <= 0:
        raise ValueError("zero amplitude never reaches a target error rate")
    gamma_awgn = float(erfcinv(2.0 * target_pe)) ** 2
    x0 = 10.0 * math.log10(gamma_awgn / stats.second_moment)

    def g(x):
        return math.log(bpsk_ber(stats, SnrBudget(x))) - math.log(target_pe)

    lo, hi = x0 - 10.0, x0 + 10.0
    while g(lo) < 0:
        lo -= 10.0
    step = 10.0
    while g(hi) > 0:
        hi += step
        step *= 2.0
        if hi - x0 > 2000.0:
            raise ArithmeticError("could not bracket the required Pt/N0")
    return brentq(g, lo, hi, xtol=xtol)

"""Pointing-error (misalignment) fading for narrow THz beams.

A Gaussian beam of footprint radius ``r_d`` lands on a receive aperture of
effective radius ``r_a``.  With radial pointing offset ``r`` the collected
power fraction is approximated by

    zeta(r) = A0 * exp(-2 r^2 / w_eq^2),

with ``A0`` the aligned collected fraction and ``w_eq`` the equivalent beam
width.  The fading law used throughout the package is the power-law density

    f(y) = kappa^2 / A0^kappa^2 * y^(kappa^2 - 1),   0 <= y <= A0,

with ``kappa = w_eq^2 / (2 sigma_s^2)``.

Note that pushing a Rayleigh offset of scale ``sigma_s`` through ``zeta``
gives the exponent ``w_eq^2 / (4 sigma_s^2)`` rather than ``kappa^2``.  The
density above is what the amplitude moments are built on, so the sampler
follows it; the Rayleigh route is kept with the scale that reproduces the
same law.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

SPEED_OF_LIGHT = 2.99792458e8

# Footprint radius used by the scenario layer unless the Gaussian-beam model
# is requested.  See README "Footprint model".
DEFAULT_FOOTPRINT_RADIUS_M = 2.5


@dataclass(frozen=True)
class AntennaConfig:
    carrier_frequency_Hz: float = 350e9
    gain_dBi: float = 30.0

    def __post_init__(self):
        if not self.carrier_frequency_Hz > 0:
            raise ValueError(f"carrier_frequency_Hz must be > 0, got {self.carrier_frequency_Hz}")
        if not math.isfinite(self.gain_dBi):
            raise ValueError(f"gain_dBi must be finite, got {self.gain_dBi}")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_Hz

    @property
    def gain_linear(self) -> float:
        return 10.0 ** (self.gain_dBi / 10.0)


@dataclass(frozen=True)
class MisalignmentParams:
    """Misalignment fading parameters for one hop.

    ``jitter_variance_m2 == 0`` denotes perfect pointing: ``kappa`` and
    ``w_eq_m`` are infinite and the fading collapses to the constant ``A0``.
    """

    jitter_variance_m2: float
    A0: float
    w_eq_m: float
    kappa: float
    r_a_m: float
    r_d_m: float

    def __post_init__(self):
        if not self.jitter_variance_m2 >= 0:
            raise ValueError(f"jitter_variance_m2 must be >= 0, got {self.jitter_variance_m2}")
        if not 0 < self.A0 <= 1:
            raise ValueError(f"A0 must lie in (0, 1], got {self.A0}")
        for name in ("w_eq_m", "kappa", "r_a_m", "r_d_m"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def kappa_sq(self) -> float:
        return self.kappa * self.kappa


def effective_aperture_radius(ant: AntennaConfig) -> float:
    """Radius of a circular aperture with the antenna's effective area."""
    return ant.wavelength_m / (2.0 * math.pi) * math.sqrt(ant.gain_linear)


def footprint_radius(ant: AntennaConfig, d: float) -> float:
    """Gaussian-beam radius after propagating ``d`` metres from a waist
    equal to the effective aperture radius."""
    if not d > 0:
        raise ValueError(f"distance must be > 0, got {d}")
    w0 = effective_aperture_radius(ant)
    z_r = math.pi * w0**2 / ant.wavelength_m
    return w0 * math.hypot(1.0, d / z_r)


def _a0_and_weq(r_a: float, r_d: float) -> tuple[float, float]:
    v = math.sqrt(math.pi) * r_a / (math.sqrt(2.0) * r_d)
    erf_v = float(erf(v))
    a0 = erf_v**2
    # w_eq^2 = r_d^2 erf(v) exp(v^2) / (sqrt(2) r_a / r_d), evaluated in logs
    log_weq_sq = 2.0 * math.log(r_d) + math.log(erf_v) + v * v - math.log(math.sqrt(2.0) * r_a / r_d)
    w_eq = math.exp(0.5 * log_weq_sq) if log_weq_sq < 1400.0 else math.inf
    return a0, w_eq


def misalignment_params(ant: AntennaConfig, d: float, jitter_variance_m2: float,
                        r_d_m: float | None = None) -> MisalignmentParams:
    """Build the fading parameters for a hop of length ``d`` metres.

    ``r_d_m`` fixes the footprint radius; when omitted it follows the
    Gaussian-beam expansion of :func:`footprint_radius`.
    """
    if not d > 0:
        raise ValueError(f"distance must be > 0, got {d}")
    if not jitter_variance_m2 >= 0 or not math.isfinite(jitter_variance_m2):
        raise ValueError(f"jitter_variance_m2 must be finite and >= 0, got {jitter_variance_m2}")
    if 0 < jitter_variance_m2 < 1.0:
        warnings.warn(
            f"jitter variance {jitter_variance_m2} m^2 is below 1 m^2; the fading factor "
            "is close to saturation there",
            stacklevel=2,
        )
    r_a = effective_aperture_radius(ant)
    r_d = footprint_radius(ant, d) if r_d_m is None else float(r_d_m)
    if not r_d > 0:
        raise ValueError(f"footprint radius must be > 0, got {r_d}")
    a0, w_eq = _a0_and_weq(r_a, r_d)
    if jitter_variance_m2 == 0 or math.isinf(w_eq):
        kappa = math.inf
    else:
        kappa = w_eq**2 / (2.0 * jitter_variance_m2)
    return MisalignmentParams(
        jitter_variance_m2=float(jitter_variance_m2),
        A0=a0,
        w_eq_m=w_eq,
        kappa=kappa,
        r_a_m=r_a,
        r_d_m=r_d,
    )


def misalignment_coefficient(p: MisalignmentParams, r):
    """Collected power fraction at radial pointing offset ``r`` metres."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radial offset must be >= 0")
    out = p.A0 * np.exp(-2.0 * r**2 / p.w_eq_m**2)
    return out if out.ndim else float(out)


def misalignment_pdf(p: MisalignmentParams, y):
    """Density of the fading coefficient; zero outside ``[0, A0]``."""
    y = np.asarray(y, dtype=float)
    k2 = p.kappa_sq
    if math.isinf(k2):
        raise ValueError("fading is degenerate at A0 for perfect pointing; no density")
    inside = (y > 0) & (y <= p.A0)
    out = np.zeros_like(y)
    yi = y[inside]
    out[inside] = k2 / yi * np.exp(k2 * np.log(yi / p.A0))
    return out if out.ndim else float(out)


def misalignment_cdf(p: MisalignmentParams, y):
    y = np.clip(np.asarray(y, dtype=float), 0.0, p.A0)
    out = (y / p.A0) ** p.kappa_sq
    return out if out.ndim else float(out)


def shape_ratio(k2: float, n: int) -> float:
    """``k2 / (k2 + n)``, with the perfect-pointing limit ``k2 = inf -> 1``."""
    return 1.0 / (1.0 + n / k2)


def misalignment_moment(p: MisalignmentParams, order: int) -> float:
    """``E[zeta^order] = kappa^2 A0^order / (kappa^2 + order)``."""
    return shape_ratio(p.kappa_sq, order) * p.A0**order


def sample_misalignment(p: MisalignmentParams, rng: np.random.Generator, size=None,
                        method: str = "inverse_cdf"):
    """Draw fading coefficients.

    ``method="inverse_cdf"`` maps uniforms through the inverse CDF;
    ``method="rayleigh"`` draws a Rayleigh radial offset and evaluates
    :func:`misalignment_coefficient`, with the offset scale chosen so both
    routes share one law.
    """
    k2 = p.kappa_sq
    if math.isinf(k2):
        return np.full(size, p.A0) if size is not None else p.A0
    if method == "inverse_cdf":
        e = rng.standard_exponential(size)
        return p.A0 * np.exp(-e / k2)
    if method == "rayleigh":
        scale = p.w_eq_m / (2.0 * p.kappa)
        r = rng.rayleigh(scale, size)
        return misalignment_coefficient(p, r)
    raise ValueError(f"unknown sampling method {method!r}")

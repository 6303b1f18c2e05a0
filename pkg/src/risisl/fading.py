"""Rician amplitude model for solar scintillation, normalised to E[alpha^2] = 1."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import i0e, i1e


class ScintillationRegime(enum.Enum):
    WEAK = "weak"
    TRANSITION = "transition"
    STRONG = "strong"


@dataclass(frozen=True)
class RicianConfig:
    K: float = 10.0

    def __post_init__(self):
        if not (self.K >= 0 and math.isfinite(self.K)):
            raise ValueError(f"Rician K must be finite and >= 0, got {self.K}")

    @property
    def omega(self) -> float:
        return 1.0

    @property
    def los_amplitude(self) -> float:
        return math.sqrt(self.K / (self.K + 1.0))

    @property
    def scatter_sigma(self) -> float:
        """Per-quadrature standard deviation of the diffuse component."""
        return math.sqrt(1.0 / (2.0 * (self.K + 1.0)))


def laguerre_half(x):
    """Laguerre function of degree 1/2 for ``x <= 0``.

    Uses exponentially scaled Bessel functions so large ``|x|`` does not
    overflow.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x > 0):
        raise ValueError("laguerre_half is only defined here for x <= 0")
    z = -x / 2.0
    out = (1.0 - x) * i0e(z) - x * i1e(z)
    return out if out.ndim else float(out)


def rician_mean_and_ms(cfg: RicianConfig) -> tuple[float, float]:
    """Return ``(E[alpha], E[alpha^2])``."""
    K = cfg.K
    mean = math.sqrt(math.pi / (4.0 * (1.0 + K))) * laguerre_half(-K)
    return mean, cfg.omega


def rician_pdf(cfg: RicianConfig, a):
    a = np.asarray(a, dtype=float)
    K = cfg.K
    z = 2.0 * a * math.sqrt(K * (K + 1.0))
    # I0(z) exp(-K - (K+1) a^2) = i0e(z) exp(z - K - (K+1) a^2)
    out = np.where(
        a > 0,
        2.0 * (K + 1.0) * a * i0e(z) * np.exp(z - K - (K + 1.0) * a * a),
        0.0,
    )
    return out if out.ndim else float(out)


def sample_rician(cfg: RicianConfig, rng: np.random.Generator, size=None):
    nu = cfg.los_amplitude
    s = cfg.scatter_sigma
    x = rng.standard_normal(size)
    y = rng.standard_normal(size)
    return np.hypot(nu + s * x, s * y)


def scintillation_regime(K: float) -> ScintillationRegime:
    if K < 0:
        raise ValueError(f"K must be >= 0, got {K}")
    if K >= 7:
        return ScintillationRegime.WEAK
    if K == 0:
        return ScintillationRegime.STRONG
    return ScintillationRegime.TRANSITION

"""Achievable rate of the two-relay simultaneous link over inter-plane distances."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from risisl.constellation import ConstellationSpec, distance_set
from risisl.link import AmplitudeStats, SnrBudget
from risisl.multi_ris import SimultaneousTopology, amplitude_stats_simultaneous
from risisl.results import SweepResult

RATE_COLUMNS = ("d_SR2_km", "d_R2D_km", "rate_bits_per_s_per_Hz")


def achievable_rate(stats: AmplitudeStats, snr: SnrBudget, mode: str = "mean_snr", order: int = 64) -> float:
    """Spectral efficiency in bits/s/Hz.

    ``mean_snr``: ``log2(1 + E[gamma])`` with ``E[gamma] = (E[A]^2 + Var[A]) Pt/N0``.
    ``ergodic``: ``E[log2(1 + gamma)]`` over Gaussian ``A``, by Gauss-Hermite.
    """
    c = snr.linear
    if mode == "mean_snr":
        return math.log2(1.0 + stats.second_moment * c)
    if mode == "ergodic":
        x, w = np.polynomial.hermite_e.hermegauss(order)
        a = stats.mean + math.sqrt(stats.variance) * x
        return float(np.dot(w, np.log2(1.0 + c * a * a)) / math.sqrt(2.0 * math.pi))
    raise ValueError(f"unknown rate mode {mode!r}")


@dataclass(frozen=True)
class RateGrid:
    d_SR2_values_km: tuple[float, ...]
    d_R2D_values_km: tuple[float, ...]
    d_SR1_km: float
    d_R1D_km: float

    def __post_init__(self):
        if not self.d_SR2_values_km or not self.d_R2D_values_km:
            raise ValueError("rate grid must be nonempty")

    @classmethod
    def for_constellation(cls, spec: ConstellationSpec, points: int = 11) -> "RateGrid":
        """Both varying distances span ``[d_nearest, d_farthest]``; relay 1 sits
        at ``d_intra`` on both hops."""
        ds = distance_set(spec)
        lo, hi = sorted((ds.d_nearest_km, ds.d_farthest_km))
        values = tuple(float(v) for v in np.linspace(lo, hi, points))
        return cls(values, values, ds.d_intra_km, ds.d_intra_km)


def rate_surface(grid: RateGrid, base_topology: SimultaneousTopology, snr: SnrBudget,
                 mode: str = "mean_snr") -> SweepResult:
    """Rate at every ``(d_SR2, d_R2D)`` grid point.

    Branch 0 of ``base_topology`` is pinned to the grid's fixed distances and
    branch 1 is moved across the grid; misalignment parameters are held as
    given.
    """
    if len(base_topology.branches) != 2:
        raise ValueError("rate surface needs a two-branch simultaneous topology")
    b1, b2 = base_topology.branches
    b1 = dataclasses.replace(b1, link=dataclasses.replace(b1.link, d_SR_m=grid.d_SR1_km * 1e3,
                                                          d_RD_m=grid.d_R1D_km * 1e3))
    result = SweepResult(columns=RATE_COLUMNS)
    for d_sr in grid.d_SR2_values_km:
        for d_rd in grid.d_R2D_values_km:
            link = dataclasses.replace(b2.link, d_SR_m=d_sr * 1e3, d_RD_m=d_rd * 1e3)
            t = dataclasses.replace(base_topology, branches=(b1, dataclasses.replace(b2, link=link)))
            rate = achievable_rate(amplitude_stats_simultaneous(t), snr, mode)
            result.rows.append((d_sr, d_rd, rate))
    return result.sort()

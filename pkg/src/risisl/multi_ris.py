"""Links through several RIS-equipped satellites.

Simultaneous: ``M`` relays each reflect the source beam straight to the
destination; their amplitudes add coherently.  Consecutive: the signal
bounces through ``M`` RISs in sequence along one orbit, fully aligned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from risisl.fading import RicianConfig, laguerre_half
from risisl.link import (
    AmplitudeStats,
    amplitude_stats_single,
    LinkBudget,
    SnrBudget,
    element_variance,
    bpsk_ber,
    element_moments,
    free_space_path_loss,
)
from risisl.misalignment import MisalignmentParams


@dataclass(frozen=True)
class SingleTopology:
    link: LinkBudget
    misalignment: MisalignmentParams
    rician: RicianConfig = RicianConfig()


@dataclass(frozen=True)
class RisBranch:
    link: LinkBudget
    misalignment_SR: MisalignmentParams
    misalignment_RD: MisalignmentParams


@dataclass(frozen=True)
class SimultaneousTopology:
    branches: tuple[RisBranch, ...]
    rician: RicianConfig = RicianConfig()

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if not self.branches:
            raise ValueError("a simultaneous topology needs at least one branch")

    @classmethod
    def from_single(cls, t: SingleTopology) -> "SimultaneousTopology":
        return cls((RisBranch(t.link, t.misalignment, t.misalignment),), t.rician)


@dataclass(frozen=True)
class ConsecutiveTopology:
    hop_count: int
    elements_per_ris: int
    end_to_end_path_loss: float
    rician: RicianConfig = RicianConfig()

    def __post_init__(self):
        if int(self.hop_count) != self.hop_count or self.hop_count < 1:
            raise ValueError(f"hop_count must be an integer >= 1, got {self.hop_count}")
        if int(self.elements_per_ris) != self.elements_per_ris or self.elements_per_ris < 1:
            raise ValueError(f"elements_per_ris must be an integer >= 1, got {self.elements_per_ris}")
        if not self.end_to_end_path_loss > 0:
            raise ValueError("end_to_end_path_loss must be > 0")


def _same_misalignment(a: MisalignmentParams, b: MisalignmentParams) -> bool:
    return all(
        math.isclose(x, y, rel_tol=1e-12) or x == y
        for x, y in ((a.kappa, b.kappa), (a.A0, b.A0))
    )


def amplitude_stats_simultaneous(t: SimultaneousTopology) -> AmplitudeStats:
    """Aggregate amplitude over all branches.

    All hops must share one ``(kappa, A0)`` pair; heterogeneous pointing
    statistics are rejected rather than averaged.
    """
    ref = t.branches[0].misalignment_SR
    for k, br in enumerate(t.branches):
        for label, p in (("SR", br.misalignment_SR), ("RD", br.misalignment_RD)):
            if not _same_misalignment(ref, p):
                raise ValueError(
                    f"branch {k} hop {label} has (kappa={p.kappa:.6g}, A0={p.A0:.6g}) but branch 0 has "
                    f"(kappa={ref.kappa:.6g}, A0={ref.A0:.6g}); the simultaneous model needs one "
                    "shared misalignment law"
                )
    m1, m2 = element_moments(t.rician, ref)
    sum_amp = sum(br.link.ris_elements * math.sqrt(free_space_path_loss(br.link)) for br in t.branches)
    sum_pow = sum(br.link.ris_elements * free_space_path_loss(br.link) for br in t.branches)
    return AmplitudeStats(mean=sum_amp * m1, variance=sum_pow * element_variance(m1, m2))


def bpsk_ber_simultaneous(t: SimultaneousTopology, snr: SnrBudget, **kw) -> float:
    return bpsk_ber(amplitude_stats_simultaneous(t), snr, **kw)


def amplitude_stats_consecutive(t: ConsecutiveTopology) -> AmplitudeStats:
    """Aggregate amplitude for ``M`` consecutive reflections, as printed:
    the ``N^M`` composite paths are treated as independent Rician terms."""
    K = t.rician.K
    mean_alpha_sq = math.pi / (4.0 * (1.0 + K)) * laguerre_half(-K) ** 2
    log_paths = t.hop_count * math.log(t.elements_per_ris)
    log_pl = math.log(t.end_to_end_path_loss)
    try:
        mean = math.exp(log_paths + 0.5 * log_pl) * math.sqrt(mean_alpha_sq)
        variance = math.exp(log_paths + log_pl) * max(1.0 - mean_alpha_sq, 0.0)
    except OverflowError:
        raise OverflowError(
            f"N^M = {t.elements_per_ris}^{t.hop_count} times the path loss overflows a double"
        ) from None
    return AmplitudeStats(mean=mean, variance=variance)


def bpsk_ber_consecutive(t: ConsecutiveTopology, snr: SnrBudget, **kw) -> float:
    return bpsk_ber(amplitude_stats_consecutive(t), snr, **kw)


def amplitude_stats(topology) -> AmplitudeStats:
    """Dispatch on topology kind."""
    if isinstance(topology, SingleTopology):
        return amplitude_stats_single(topology.link, topology.misalignment, topology.rician)
    if isinstance(topology, SimultaneousTopology):
        return amplitude_stats_simultaneous(topology)
    if isinstance(topology, ConsecutiveTopology):
        return amplitude_stats_consecutive(topology)
    raise TypeError(f"unsupported topology {type(topology).__name__}")

"""Analytic-vs-Monte-Carlo agreement suite behind ``risisl validate``.

Each case is a single-RIS link at the intra-plane distance.  SNR points
are placed where the analytic BER equals ``10^(-k/2)``, ``k = 1..10``, so
the suite covers ``P_e`` from about 0.3 down to 1e-5 for every case.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

from risisl.constellation import distance_set, preset
from risisl.fading import RicianConfig
from risisl.link import LinkBudget, SnrBudget, amplitude_stats_single, bpsk_ber, required_pt_over_n0_dB
from risisl.misalignment import DEFAULT_FOOTPRINT_RADIUS_M, AntennaConfig, misalignment_params
from risisl.montecarlo import McConfig, semi_analytic_ber_many
from risisl.multi_ris import SingleTopology
from risisl.results import SweepResult

VALIDATION_COLUMNS = ("scenario_id", "pt_over_n0_dB", "analytic_ber", "mc_ber", "mc_stderr", "ratio", "pass")
TARGET_BERS = tuple(10.0 ** (-k / 2) for k in range(1, 11))


@dataclass(frozen=True)
class AgreementCase:
    preset: str
    ris_elements: int
    jitter_variance_m2: float
    rician_K: float = 10.0
    footprint_radius_m: float = DEFAULT_FOOTPRINT_RADIUS_M

    @property
    def case_id(self) -> str:
        return f"{self.preset}-N{self.ris_elements}-s2_{self.jitter_variance_m2:g}"

    def topology(self, antenna: AntennaConfig = AntennaConfig()) -> SingleTopology:
        d = distance_set(preset(self.preset)).d_intra_km * 1e3
        mis = misalignment_params(antenna, d, self.jitter_variance_m2, self.footprint_radius_m)
        return SingleTopology(LinkBudget(d, d, self.ris_elements, antenna), mis, RicianConfig(self.rician_K))


def default_cases(presets=("starlink", "iridium"), elements=(256, 1024), jitters=(1.0, 10.0)):
    return [AgreementCase(p, n, j) for n, p, j in itertools.product(elements, presets, jitters)]


@dataclass(frozen=True)
class CaseSummary:
    case_id: str
    worst_ratio: float
    passed: bool


def run_agreement(cases, mc: McConfig, tolerance: float = 2.0, targets=TARGET_BERS):
    """Return ``(SweepResult, [CaseSummary])``.

    A point passes when ``max(a/m, m/a) <= tolerance``; cases sharing an
    element count are simulated together on common random numbers.
    """
    plan = []
    for case in cases:
        t = case.topology()
        stats = amplitude_stats_single(t.link, t.misalignment, t.rician)
        snrs = [SnrBudget(required_pt_over_n0_dB(stats, p)) for p in targets]
        plan.append((case, t, stats, snrs))

    estimates = {}
    for n in sorted({c.ris_elements for c in cases}):
        group = [item for item in plan if item[0].ris_elements == n]
        # the SNR grids differ per case, so run each group over the union
        union = sorted({s.pt_over_n0_dB for item in group for s in item[3]})
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            est = semi_analytic_ber_many([item[1] for item in group], union, mc)
        for item, e in zip(group, est):
            lookup = dict(zip(union, e))
            estimates[item[0].case_id] = [lookup[s.pt_over_n0_dB] for s in item[3]]

    result = SweepResult(columns=VALIDATION_COLUMNS)
    summaries = []
    for case, _t, stats, snrs in plan:
        worst = 1.0
        for snr, e in zip(snrs, estimates[case.case_id]):
            a = bpsk_ber(stats, snr)
            ratio = max(a / e.value, e.value / a) if e.value > 0 else float("inf")
            worst = max(worst, ratio)
            result.rows.append((case.case_id, snr.pt_over_n0_dB, a, e.value, e.std_error, ratio,
                                ratio <= tolerance))
        summaries.append(CaseSummary(case.case_id, worst, worst <= tolerance))
    result.metadata = {
        "suite": "analytic-vs-mc",
        "seed": str(mc.seed),
        "trials": str(mc.trials),
        "tolerance": f"{tolerance:g}",
    }
    return result, summaries

"""BER versus Pt/N0 for a 1024-element RIS: aligned, sigma_s^2 = 1 and 10 m^2.

Pass --mc to add semi-analytic Monte Carlo points (1e5 trials each).
"""

import argparse
import warnings

import numpy as np

from risisl.link import SnrBudget, bpsk_ber
from risisl.montecarlo import McConfig, semi_analytic_ber_many
from risisl.results import SweepResult, emit_csv

from _common import out_path, single, single_stats

parser = argparse.ArgumentParser()
parser.add_argument("--preset", default="starlink")
parser.add_argument("--mc", action="store_true")
parser.add_argument("--trials", type=int, default=100_000)
args = parser.parse_args()

pts = np.arange(480.0, 562.0, 2.0)
jitters = (0.0, 1.0, 10.0)
cols = ["pt_over_n0_dB"] + [f"analytic_ber_s2_{j:g}" for j in jitters]
if args.mc:
    cols += [f"mc_ber_s2_{j:g}" for j in jitters]
r = SweepResult(columns=tuple(cols), metadata={"preset": args.preset, "ris_elements": "1024"})

analytic = [[bpsk_ber(single_stats(args.preset, 1024, j), SnrBudget(p)) for p in pts] for j in jitters]
mc_cols = []
if args.mc:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        est = semi_analytic_ber_many([single(args.preset, 1024, j) for j in jitters], list(pts),
                                     McConfig(trials=args.trials, seed=1))
    mc_cols = [[e.value for e in per_topology] for per_topology in est]
for i, p in enumerate(pts):
    r.rows.append((float(p), *(a[i] for a in analytic), *(m[i] for m in mc_cols)))

emit_csv(r, out_path(f"ber_alignment_{args.preset}.csv"))
for j, a in zip(jitters, analytic):
    first = next((p for p, v in zip(pts, a) if v < 1e-3), None)
    print(f"sigma_s^2 = {j:>4g} m^2: BER < 1e-3 from Pt/N0 = {first} dB")

"""Consecutive reflections: power gaps, and the closed form against the
product-form Monte Carlo for small instances."""

from risisl.link import LinkBudget, free_space_path_loss, required_pt_over_n0_dB
from risisl.montecarlo import McConfig, empirical_amplitude_stats
from risisl.multi_ris import ConsecutiveTopology, amplitude_stats_consecutive

from _common import ANT, d_intra_m

d = d_intra_m("starlink")
pl = free_space_path_loss(LinkBudget(d, d, 1, ANT))


def req(m, n):
    return required_pt_over_n0_dB(amplitude_stats_consecutive(ConsecutiveTopology(m, n, pl)), 1e-4)


print(f"M = 2 -> 4 at N = 1024: {req(2, 1024) - req(4, 1024):.2f} dB")
for m in (2, 4):
    gains = [req(m, n) - req(m, 2 * n) for n in (256, 512, 1024)]
    print(f"N-doubling gains at M = {m}: " + ", ".join(f"{g:.2f} dB" for g in gains))

print("\nclosed form vs product-form Monte Carlo (unit path loss, 1e6 trials)")
for n, m in ((2, 1), (4, 1), (4, 2), (8, 2)):
    t = ConsecutiveTopology(m, n, 1.0)
    emp = empirical_amplitude_stats(t, McConfig(trials=1_000_000, seed=3))
    cf = amplitude_stats_consecutive(t)
    print(f"  N={n} M={m}: mean {cf.mean:9.4f} vs {emp.stats.mean:9.4f} +/- {emp.mean_std_error:.4f}, "
          f"var {cf.variance:9.4f} vs {emp.stats.variance:9.4f} +/- {emp.variance_std_error:.4f}")

"""Simultaneous relays: BER shift from adding equal RIS branches."""

from risisl.link import required_pt_over_n0_dB
from risisl.multi_ris import RisBranch, SimultaneousTopology, amplitude_stats_simultaneous

from _common import single

base = single("starlink", 1024, 1.0)
branch = RisBranch(base.link, base.misalignment, base.misalignment)
ref = None
for m in (1, 2, 3, 4):
    stats = amplitude_stats_simultaneous(SimultaneousTopology((branch,) * m, base.rician))
    x = required_pt_over_n0_dB(stats, 1e-4)
    ref = x if ref is None else ref
    print(f"M = {m}: required Pt/N0 {x:8.3f} dB  ({ref - x:6.3f} dB below M = 1)")

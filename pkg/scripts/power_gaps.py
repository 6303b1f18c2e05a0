"""Required Pt/N0 at fixed BER: element-count doubling, jitter penalty,
scintillation regime, footprint sensitivity."""

from risisl.link import required_pt_over_n0_dB

from _common import single_stats


def req(target, **kw):
    return required_pt_over_n0_dB(single_stats(**kw), target)


print("N-doubling gain at BER 1e-4 (Starlink, sigma_s^2 = 1 m^2)")
for n in (256, 512, 1024):
    print(f"  N {n:>4} -> {2 * n:>4}: {req(1e-4, n=n) - req(1e-4, n=2 * n):6.3f} dB")

print("\nJitter penalty sigma_s^2 = 1 -> 10 m^2 at BER 1e-3 (N = 1024)")
for name in ("starlink", "iridium"):
    print(f"  {name:>9}: {req(1e-3, name=name, jitter=10.0) - req(1e-3, name=name, jitter=1.0):6.2f} dB")

print("\nScintillation: extra power vs K = 10 at BER 1e-4")
for K in (0.0, 1.0, 3.0, 7.0, 20.0):
    print(f"  K = {K:>4g}: {req(1e-4, K=K) - req(1e-4, K=10.0):+7.3f} dB")

print("\nFootprint radius sensitivity of the jitter penalty (BER 1e-3)")
for r_d in (2.0, 2.3, 2.5, 2.7, 3.0, 4.0):
    gap = req(1e-3, jitter=10.0, r_d=r_d) - req(1e-3, jitter=1.0, r_d=r_d)
    print(f"  r_d = {r_d:3.1f} m: {gap:6.2f} dB")

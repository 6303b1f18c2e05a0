"""Monte Carlo oracle for the analytic amplitude and BER expressions.

Every trial draws all Rician and misalignment factors of a topology and
forms the aggregate amplitude ``A`` directly, with no Gaussian
approximation.  BER is estimated semi-analytically: each trial contributes
the exact conditional BPSK error ``Q(sqrt(2 A^2 Pt/N0))``.

Random numbers come from fixed-size blocks of trials, each with its own
stream keyed by ``(seed, block index)``.  Results therefore depend only on
``(topology, snr, seed, trials)``; batch size and worker count change how
blocks are scheduled, never what they contain.  Partial sums are merged in
block order with compensated summation.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from risisl.link import AmplitudeStats, SnrBudget, bpsk_conditional_error, free_space_path_loss
from risisl.multi_ris import ConsecutiveTopology, SimultaneousTopology, SingleTopology

BLOCK_TRIALS = 1024


@dataclass(frozen=True)
class McConfig:
    trials: int = 100_000
    seed: int = 0
    batch_size: int = 16_384
    workers: int = 1

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials}")
        if int(self.batch_size) != self.batch_size or self.batch_size < 1:
            raise ValueError(f"batch_size must be a positive integer, got {self.batch_size}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    trials_used: int


@dataclass(frozen=True)
class EmpiricalAmplitudeStats:
    stats: AmplitudeStats
    mean_std_error: float
    variance_std_error: float
    trials_used: int


# --- per-topology draws ---------------------------------------------------

def _as_branches(topology):
    if isinstance(topology, SingleTopology):
        return SimultaneousTopology.from_single(topology)
    return topology


def _layout(topology) -> tuple:
    if isinstance(topology, ConsecutiveTopology):
        return ("consecutive", topology.elements_per_ris, topology.hop_count)
    t = _as_branches(topology)
    return ("elements",) + tuple(br.link.ris_elements for br in t.branches)


def _draw_primitives(layout: tuple, rng: np.random.Generator, trials: int):
    if layout[0] == "consecutive":
        n, m = layout[1], layout[2]
        # hop factors: source -> RIS 1, (m - 1) RIS-to-RIS matrices, RIS m -> destination
        count = 2 * n + (m - 1) * n * n
        return rng.standard_normal((2, trials, count))
    total = sum(layout[1:])
    normals = rng.standard_normal((4, trials, total))
    expo = rng.standard_exponential((2, trials, total))
    return normals, expo


def _rician_amplitude(rician, x, y):
    return np.hypot(rician.los_amplitude + rician.scatter_sigma * x, rician.scatter_sigma * y)


def _amplitudes(topology, prims, cache=None) -> np.ndarray:
    if isinstance(topology, ConsecutiveTopology):
        return _chain_amplitudes(topology, prims)
    t = _as_branches(topology)
    normals, expo = prims
    cache = {} if cache is None else cache
    key = ("alpha", t.rician.K)
    if key not in cache:
        cache[key] = (_rician_amplitude(t.rician, normals[0], normals[1])
                      * _rician_amplitude(t.rician, normals[2], normals[3]))
    alpha = cache[key]
    total = np.zeros(alpha.shape[0])
    offset = 0
    for br in t.branches:
        n = br.link.ris_elements
        sl = slice(offset, offset + n)
        sr, rd = br.misalignment_SR, br.misalignment_RD
        # topologies differing only in path gain share this sum
        zkey = ("zsum", t.rician.K, sr.kappa_sq, rd.kappa_sq, offset, n)
        offset += n
        if zkey not in cache:
            # inverse-CDF misalignment: zeta = A0 * exp(-E / kappa^2), E ~ Exp(1)
            zeta = np.exp(-expo[0, :, sl] / sr.kappa_sq - expo[1, :, sl] / rd.kappa_sq)
            cache[zkey] = np.einsum("ij,ij->i", alpha[:, sl], zeta)
        gain = math.sqrt(free_space_path_loss(br.link)) * sr.A0 * rd.A0
        total += gain * cache[zkey]
    return total


def _chain_amplitudes(t: ConsecutiveTopology, normals) -> np.ndarray:
    n, m = t.elements_per_ris, t.hop_count
    a = _rician_amplitude(t.rician, normals[0], normals[1])
    trials = a.shape[0]
    vec = a[:, :n]
    offset = n
    for _ in range(m - 1):
        h = a[:, offset:offset + n * n].reshape(trials, n, n)
        offset += n * n
        vec = np.einsum("ti,tij->tj", vec, h)
    last = a[:, offset:offset + n]
    return math.sqrt(t.end_to_end_path_loss) * np.einsum("ti,ti->t", vec, last)


def draw_aggregate_amplitude(topology, rng: np.random.Generator, size=None):
    """Draw the aggregate amplitude ``A`` (all fading factors sampled, phases aligned)."""
    trials = 1 if size is None else int(size)
    prims = _draw_primitives(_layout(topology), rng, trials)
    a = _amplitudes(topology, prims)
    return float(a[0]) if size is None else a


# --- block engine -----------------------------------------------------------

def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _block_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, BLOCK_TRIALS)
    return [BLOCK_TRIALS] * full + ([rest] if rest else [])


def _run_blocks(topologies: Sequence, mc: McConfig, reduce_block):
    """Evaluate ``reduce_block(amplitudes_per_topology)`` on every block and
    return the per-block results in block order."""
    layouts = {_layout(t) for t in topologies}
    if len(layouts) != 1:
        raise ValueError("topologies evaluated together must share one element layout")
    layout = layouts.pop()
    sizes = _block_sizes(mc.trials)

    def work(block_ids):
        out = []
        for b in block_ids:
            prims = _draw_primitives(layout, _block_rng(mc.seed, b), sizes[b])
            cache = {}
            amps = [_amplitudes(t, prims, cache) for t in topologies]
            out.append(reduce_block(amps))
        return out

    per_unit = max(1, mc.batch_size // BLOCK_TRIALS)
    units = [list(range(i, min(i + per_unit, len(sizes)))) for i in range(0, len(sizes), per_unit)]
    if mc.workers == 1:
        results = [work(u) for u in units]
    else:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            results = list(pool.map(work, units))
    return [r for unit in results for r in unit]


def _normalise_snr(snr):
    if isinstance(snr, SnrBudget):
        return [snr], True
    if isinstance(snr, (int, float)):
        return [SnrBudget(float(snr))], True
    return [s if isinstance(s, SnrBudget) else SnrBudget(float(s)) for s in snr], False


def semi_analytic_ber_many(topologies: Sequence, snr, mc: McConfig):
    """Semi-analytic BER for several topologies on common random numbers.

    Each topology sees exactly the draws it would see on its own with the
    same seed, so batching is purely a cost saving.  Returns one list of
    :class:`McEstimate` (one per SNR point) per topology.
    """
    snrs, _ = _normalise_snr(snr)
    root_c = np.sqrt(np.array([s.linear for s in snrs]))

    def reduce_block(amps):
        out = []
        for a in amps:
            q = bpsk_conditional_error((a[:, None] * root_c[None, :]) ** 2)
            # shifted sums keep a deterministic channel at exactly zero spread
            k = q[0]
            d = q - k
            out.append((k, d.sum(axis=0), (d * d).sum(axis=0), q.shape[0]))
        return out

    blocks = _run_blocks(topologies, mc, reduce_block)
    n = mc.trials
    results = []
    for k in range(len(topologies)):
        shift = blocks[0][k][0]
        est = []
        for j in range(len(snrs)):
            s1_terms, s2_terms = [], []
            for blk in blocks:
                kb, s1b, s2b, nb = blk[k]
                delta = float(kb[j]) - float(shift[j])
                s1_terms += [float(s1b[j]), nb * delta]
                s2_terms += [float(s2b[j]), 2.0 * delta * float(s1b[j]), nb * delta * delta]
            s1 = math.fsum(s1_terms)
            s2 = math.fsum(s2_terms)
            mean_shifted = s1 / n
            var = max(s2 - s1 * mean_shifted, 0.0) / (n - 1) if n > 1 else 0.0
            value = float(shift[j]) + mean_shifted
            if value < 10.0 / n:
                warnings.warn(
                    f"MC BER {value:.3e} is below 10/trials; the tail estimate is unreliable",
                    stacklevel=2,
                )
            est.append(McEstimate(value=value, std_error=math.sqrt(var / n), trials_used=n))
        results.append(est)
    return results


def semi_analytic_ber(topology, snr, mc: McConfig):
    """Semi-analytic BER estimate(s) for one topology."""
    snrs, scalar = _normalise_snr(snr)
    est = semi_analytic_ber_many([topology], snrs, mc)[0]
    return est[0] if scalar else est


def amplitude_samples(topology, mc: McConfig) -> np.ndarray:
    """All ``mc.trials`` aggregate amplitudes, in trial order."""
    blocks = _run_blocks([topology], mc, lambda amps: amps[0])
    return np.concatenate(blocks)


def empirical_amplitude_stats(topology, mc: McConfig) -> EmpiricalAmplitudeStats:
    a = amplitude_samples(topology, mc)
    n = a.size
    mean = math.fsum(a) / n
    centred = a - mean
    var = math.fsum(centred**2) / (n - 1) if n > 1 else 0.0
    m4 = math.fsum(centred**4) / n
    return EmpiricalAmplitudeStats(
        stats=AmplitudeStats(mean=mean, variance=var),
        mean_std_error=math.sqrt(var / n),
        variance_std_error=math.sqrt(max(m4 - var * var, 0.0) / n),
        trials_used=n,
    )

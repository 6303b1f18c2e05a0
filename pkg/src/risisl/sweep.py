"""Run a scenario's sweep axis and collect a :class:`SweepResult`."""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor

import risisl
from risisl.link import SnrBudget, bpsk_ber
from risisl.montecarlo import semi_analytic_ber
from risisl.multi_ris import amplitude_stats
from risisl.quadrature import IntegrationError
from risisl.rate import RateGrid, achievable_rate, rate_surface
from risisl.results import SweepResult
from risisl.scenario import Scenario, build_topology, scenario_hash

# failures recorded against a row instead of aborting the sweep
ROW_ERRORS = (ArithmeticError, IntegrationError, ValueError)


def result_metadata(s: Scenario) -> dict[str, str]:
    uses_mc = "mc_ber" in s.sweep.outputs
    return {
        "scenario": s.name,
        "scenario_hash": scenario_hash(s),
        "seed": str(s.mc_config.seed) if uses_mc else "none",
        "version": risisl.__version__,
    }


def _columns(s: Scenario) -> tuple[str, ...]:
    cols = [s.sweep.variable]
    if "analytic_ber" in s.sweep.outputs:
        cols.append("analytic_ber")
    if "mc_ber" in s.sweep.outputs:
        cols += ["mc_ber", "mc_stderr"]
    if "rate" in s.sweep.outputs:
        cols.append("rate_bits_per_s_per_Hz")
    return tuple(cols)


def _row_model(s: Scenario, value):
    """Topology and SNR for one sweep value."""
    var = s.sweep.variable
    kw = {}
    if var == "ris_elements":
        kw["ris_elements"] = value
    elif var == "jitter_variance_m2":
        kw["jitter_variance_m2"] = value
    elif var == "rician_K":
        kw["rician_K"] = value
    snr = SnrBudget(value if var == "pt_over_n0_dB" else s.pt_over_n0_dB)
    return build_topology(s, **kw), snr


def _analytic_row(s: Scenario, value):
    """Analytic cells for one value, or an error message."""
    try:
        topology, snr = _row_model(s, value)
        stats = amplitude_stats(topology)
        cells = {}
        if "analytic_ber" in s.sweep.outputs:
            cells["analytic_ber"] = bpsk_ber(stats, snr)
        if "rate" in s.sweep.outputs:
            cells["rate_bits_per_s_per_Hz"] = achievable_rate(stats, snr, s.rate_mode)
        return cells, None
    except ROW_ERRORS as exc:
        return {}, f"{type(exc).__name__}: {exc}"


def _mc_cells(s: Scenario, values, workers: int):
    mc = dataclasses.replace(s.mc_config, workers=workers)
    out, errors = {}, {}
    if s.sweep.variable == "pt_over_n0_dB":
        # one run shared by every SNR point
        try:
            topology, _ = _row_model(s, values[0]) if values else (None, None)
            if values:
                est = semi_analytic_ber(topology, [SnrBudget(v) for v in values], mc)
                out = {i: e for i, e in enumerate(est)}
        except ROW_ERRORS as exc:
            errors = {i: f"{type(exc).__name__}: {exc}" for i in range(len(values))}
        return out, errors
    for i, v in enumerate(values):
        try:
            topology, snr = _row_model(s, v)
            out[i] = semi_analytic_ber(topology, snr, mc)
        except ROW_ERRORS as exc:
            errors[i] = f"{type(exc).__name__}: {exc}"
    return out, errors


def run_sweep(s: Scenario, workers: int | None = None) -> SweepResult:
    """Evaluate every point of the scenario's sweep axis.

    Rows run concurrently; assembly is ordered, so output does not depend
    on ``workers``.  A failing row gets NaN cells and a row-level error
    message instead of aborting the sweep.
    """
    workers = s.mc_config.workers if workers is None else workers
    if s.sweep.variable == "distance_grid":
        grid = RateGrid.for_constellation(s.constellation_spec, s.sweep.points)
        r = rate_surface(grid, build_topology(s), SnrBudget(s.pt_over_n0_dB), s.rate_mode)
        r.metadata = result_metadata(s)
        return r

    values = s.sweep.values()
    columns = _columns(s)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            analytic = list(pool.map(lambda v: _analytic_row(s, v), values))
    else:
        analytic = [_analytic_row(s, v) for v in values]

    mc_out, mc_err = ({}, {})
    if "mc_ber" in s.sweep.outputs:
        mc_out, mc_err = _mc_cells(s, values, workers)

    result = SweepResult(columns=columns, metadata=result_metadata(s))
    for i, v in enumerate(values):
        cells, err = analytic[i]
        if i in mc_out:
            cells["mc_ber"] = mc_out[i].value
            cells["mc_stderr"] = mc_out[i].std_error
        messages = [m for m in (err, mc_err.get(i)) if m]
        if messages:
            result.row_errors[i] = "; ".join(messages)
        result.rows.append((v,) + tuple(cells.get(c, math.nan) for c in columns[1:]))
    return result.sort()

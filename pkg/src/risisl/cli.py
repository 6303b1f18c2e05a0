"""Command-line entry point: ``risisl {geometry,ber,rate,mc,validate}``.

Exit codes: 0 success, 1 validation failures, 2 bad configuration,
3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import risisl
from risisl.constellation import PRESETS, distance_set
from risisl.montecarlo import McConfig
from risisl.quadrature import IntegrationError
from risisl.results import SweepResult, emit_csv
from risisl.scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from risisl.sweep import result_metadata, run_sweep
from risisl.validation import default_cases, run_agreement

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4

DEFAULT_DOCUMENTS = {
    "ber": """
name = "ber"
jitter_variance_m2 = 1.0
[topology]
kind = "single"
ris_elements = 1024
[sweep]
variable = "pt_over_n0_dB"
start = 480.0
stop = 560.0
step = 2.0
""",
    "mc": """
name = "mc"
jitter_variance_m2 = 1.0
[topology]
kind = "single"
ris_elements = 1024
[sweep]
variable = "pt_over_n0_dB"
start = 490.0
stop = 506.0
step = 2.0
outputs = ["analytic_ber", "mc_ber"]
[mc]
trials = 100000
""",
    "rate": """
name = "rate"
jitter_variance_m2 = 1.0
pt_over_n0_dB = 500.0
[topology]
kind = "simultaneous"
relays = 2
ris_elements = 1024
[sweep]
variable = "distance_grid"
points = 11
""",
}

MC_COLUMNS = ("scenario_id", "pt_over_n0_dB", "mc_ber", "mc_stderr", "analytic_ber")


class UsageError(Exception):
    pass


def _scenario(args, command: str) -> Scenario:
    if args.config:
        s = load_scenario(args.config)
    else:
        s = parse_scenario(DEFAULT_DOCUMENTS[command])
    if args.preset:
        s = dataclasses.replace(s, constellation=args.preset)
    if args.seed is not None or args.trials is not None:
        mc = s.mc_config
        s = dataclasses.replace(s, mc=McConfig(
            trials=args.trials if args.trials is not None else mc.trials,
            seed=args.seed if args.seed is not None else mc.seed,
            batch_size=mc.batch_size,
            workers=mc.workers,
        ))
    return s


def _write(result: SweepResult, out):
    emit_csv(result, out if out else sys.stdout)


def cmd_geometry(args) -> int:
    if args.config:
        spec = load_scenario(args.config).constellation_spec
        if args.preset:
            spec = PRESETS[args.preset]
    elif args.preset:
        spec = PRESETS[args.preset]
    else:
        raise UsageError("geometry needs --preset or --config")
    ds = distance_set(spec)
    result = SweepResult(columns=("d_intra_km", "d_nearest_km", "d_farthest_km"),
                         rows=[(ds.d_intra_km, ds.d_nearest_km, ds.d_farthest_km)])
    _write(result, args.out)
    return EXIT_OK


def cmd_ber(args) -> int:
    s = _scenario(args, "ber")
    if s.sweep.variable == "distance_grid":
        raise UsageError("ber needs a BER sweep axis, not distance_grid")
    r = run_sweep(s, workers=args.workers)
    _write(r, args.out)
    return EXIT_OK


def cmd_rate(args) -> int:
    s = _scenario(args, "rate")
    if "rate" not in s.sweep.outputs:
        raise UsageError("rate needs a scenario whose sweep outputs include rate")
    _write(run_sweep(s, workers=args.workers), args.out)
    return EXIT_OK


def cmd_mc(args) -> int:
    s = _scenario(args, "mc")
    if s.sweep.variable != "pt_over_n0_dB":
        raise UsageError("mc needs a pt_over_n0_dB sweep axis")
    s = dataclasses.replace(s, sweep=dataclasses.replace(s.sweep, outputs=("analytic_ber", "mc_ber")))
    r = run_sweep(s, workers=args.workers)
    out = SweepResult(columns=MC_COLUMNS, metadata=result_metadata(s), row_errors=dict(r.row_errors))
    for pt, analytic, mc_ber, mc_se in r.rows:
        out.rows.append((s.name, pt, mc_ber, mc_se, analytic))
    _write(out, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    presets = (args.preset,) if args.preset else ("starlink", "iridium")
    mc = McConfig(trials=args.trials or 100_000, seed=args.seed or 0, workers=args.workers or 1)
    result, summaries = run_agreement(default_cases(presets=presets), mc)
    result.metadata["version"] = risisl.__version__
    _write(result, args.out)
    report = sys.stderr if not args.out else sys.stdout
    print(f"{'case':<28} {'worst ratio':>12}  result", file=report)
    for c in summaries:
        print(f"{c.case_id:<28} {c.worst_ratio:>12.4g}  {'PASS' if c.passed else 'FAIL'}", file=report)
    return EXIT_OK if all(c.passed for c in summaries) else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="risisl", description="RIS-assisted THz inter-satellite link analysis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {risisl.__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "geometry": (cmd_geometry, "inter-satellite distances for a constellation"),
        "ber": (cmd_ber, "BER sweep (analytic, optionally Monte Carlo)"),
        "rate": (cmd_rate, "achievable-rate surface over distance"),
        "mc": (cmd_mc, "Monte Carlo BER sweep next to the analytic curve"),
        "validate": (cmd_validate, "analytic-vs-Monte-Carlo agreement suite"),
    }
    for name, (fn, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="scenario TOML file")
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--seed", type=_u64, help="Monte Carlo seed (unsigned 64-bit)")
        p.add_argument("--trials", type=_positive_int, help="Monte Carlo trials")
        p.add_argument("--preset", choices=sorted(PRESETS), help="constellation preset")
        p.add_argument("--workers", type=_positive_int, help="worker threads")
        p.set_defaults(func=fn)
    return parser


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return args.func(args)
    except (ScenarioError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, IntegrationError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

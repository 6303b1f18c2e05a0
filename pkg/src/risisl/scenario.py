"""Scenario files: a TOML document describing one sweep.

Example::

    name = "fig6-like"
    constellation = "starlink"
    jitter_variance_m2 = 1.0

    [topology]
    kind = "single"
    ris_elements = 1024

    [sweep]
    variable = "pt_over_n0_dB"
    start = 480.0
    stop = 560.0
    step = 2.0
    outputs = ["analytic_ber", "mc_ber"]

    [mc]
    trials = 100000
    seed = 7

Everything except ``[sweep]`` has defaults.  Unknown keys are rejected with
their full key path.
"""

from __future__ import annotations

import dataclasses
import hashlib
import math
from dataclasses import dataclass, field

import tomli
import tomli_w

from risisl.constellation import PRESETS, ConstellationSpec, distance_set
from risisl.fading import RicianConfig
from risisl.link import LinkBudget, free_space_path_loss
from risisl.misalignment import DEFAULT_FOOTPRINT_RADIUS_M, AntennaConfig, misalignment_params
from risisl.montecarlo import McConfig
from risisl.multi_ris import ConsecutiveTopology, RisBranch, SimultaneousTopology, SingleTopology


class ScenarioError(ValueError):
    """Invalid scenario document; ``path`` is the offending key path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


SWEEP_UNITS = {
    "pt_over_n0_dB": "dB",
    "ris_elements": "log2",
    "jitter_variance_m2": "m2",
    "rician_K": "linear",
    "distance_grid": "km",
}
OUTPUTS = ("analytic_ber", "mc_ber", "rate")
TOPOLOGY_KINDS = ("single", "simultaneous", "consecutive")
HOP_DISTANCES = ("intra", "nearest", "farthest")
FOOTPRINT_MODELS = ("fixed", "gaussian")
RATE_MODES = ("mean_snr", "ergodic")


@dataclass(frozen=True)
class FootprintConfig:
    model: str = "fixed"
    radius_m: float = DEFAULT_FOOTPRINT_RADIUS_M

    def r_d_m(self):
        return self.radius_m if self.model == "fixed" else None


@dataclass(frozen=True)
class TopologyConfig:
    kind: str = "single"
    ris_elements: int = 1024
    relays: int = 2
    hops: int = 2
    ris_efficiency: float = 1.0
    hop_distance: str = "intra"


@dataclass(frozen=True)
class SweepAxis:
    """One sweep axis.

    Numeric axes use ``start``/``stop``/``step``; for ``ris_elements`` the
    step is in doublings (``step = 1`` means ``N, 2N, 4N, ...``).  The
    ``distance_grid`` axis takes ``points`` per side instead.
    """
    variable: str
    start: float | None = None
    stop: float | None = None
    step: float | None = None
    points: int | None = None
    unit: str = ""
    outputs: tuple[str, ...] = ("analytic_ber",)

    def values(self) -> list:
        if self.variable == "distance_grid":
            return []
        if self.variable == "ris_elements":
            out, k = [], 0
            while True:
                v = self.start * 2.0 ** (k * self.step)
                if v > self.stop * (1 + 1e-12):
                    return out
                out.append(int(round(v)))
                k += 1
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + k * self.step for k in range(count)]


@dataclass(frozen=True)
class Scenario:
    sweep: SweepAxis
    name: str = "scenario"
    constellation: str | ConstellationSpec = "starlink"
    antenna: AntennaConfig = field(default_factory=AntennaConfig)
    rician_K: float = 10.0
    jitter_variance_m2: float = 1.0
    pt_over_n0_dB: float = 500.0
    footprint: FootprintConfig = field(default_factory=FootprintConfig)
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    rate_mode: str = "mean_snr"
    mc: McConfig | None = None

    @property
    def constellation_spec(self) -> ConstellationSpec:
        if isinstance(self.constellation, str):
            return PRESETS[self.constellation]
        return self.constellation

    @property
    def mc_config(self) -> McConfig:
        return self.mc if self.mc is not None else McConfig()


# --- parsing ----------------------------------------------------------------

def _join(path, key):
    return f"{path}.{key}" if path else key


def _check_keys(table: dict, allowed, path: str):
    for key in table:
        if key not in allowed:
            raise ScenarioError(_join(path, key), f"unknown key (allowed: {', '.join(sorted(allowed))})")


def _table(doc: dict, key: str, path: str = "") -> dict:
    v = doc.get(key, {})
    if not isinstance(v, dict):
        raise ScenarioError(_join(path, key), "expected a table")
    return v


def _real(table, key, path, default=None, lo=None, lo_open=False):
    p = _join(path, key)
    v = table.get(key, default)
    if v is None:
        raise ScenarioError(p, "missing required value")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(p, f"expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ScenarioError(p, "must be finite")
    if lo is not None and (v < lo or (lo_open and v == lo)):
        raise ScenarioError(p, f"must be {'>' if lo_open else '>='} {lo:g}, got {v:g}")
    return v


def _integer(table, key, path, default=None, lo=1):
    p = _join(path, key)
    v = table.get(key, default)
    if v is None:
        raise ScenarioError(p, "missing required value")
    if isinstance(v, float) and v.is_integer():
        v = int(v)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioError(p, f"expected an integer, got {v!r}")
    if v < lo:
        raise ScenarioError(p, f"must be >= {lo}, got {v}")
    return v


def _choice(table, key, path, options, default):
    v = table.get(key, default)
    if v not in options:
        raise ScenarioError(_join(path, key), f"expected one of {', '.join(options)}, got {v!r}")
    return v


def _constellation(v):
    if isinstance(v, str):
        if v not in PRESETS:
            raise ScenarioError("constellation", f"unknown preset {v!r} (known: {', '.join(sorted(PRESETS))})")
        return v
    if not isinstance(v, dict):
        raise ScenarioError("constellation", "expected a preset name or a table")
    path = "constellation"
    _check_keys(v, {"altitude_km", "sats_per_orbit", "orbit_count", "earth_radius_km"}, path)
    try:
        return ConstellationSpec(
            altitude_km=_real(v, "altitude_km", path, lo=0.0, lo_open=True),
            sats_per_orbit=_integer(v, "sats_per_orbit", path, lo=2),
            orbit_count=_integer(v, "orbit_count", path, lo=2),
            earth_radius_km=_real(v, "earth_radius_km", path, default=6378.0, lo=0.0, lo_open=True),
        )
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(path, str(exc)) from None


def _sweep(t: dict) -> SweepAxis:
    path = "sweep"
    _check_keys(t, {"variable", "start", "stop", "step", "points", "unit", "outputs"}, path)
    var = _choice(t, "variable", path, tuple(SWEEP_UNITS), None)
    unit = t.get("unit", "")
    if unit not in ("", SWEEP_UNITS[var]):
        raise ScenarioError("sweep.unit", f"axis {var} is in {SWEEP_UNITS[var]!r}, got {unit!r}")
    default_out = ["rate"] if var == "distance_grid" else ["analytic_ber"]
    outputs = t.get("outputs", default_out)
    if not isinstance(outputs, list) or not outputs:
        raise ScenarioError("sweep.outputs", "expected a nonempty list")
    for o in outputs:
        if o not in OUTPUTS:
            raise ScenarioError("sweep.outputs", f"unknown output {o!r} (known: {', '.join(OUTPUTS)})")
    if len(set(outputs)) != len(outputs):
        raise ScenarioError("sweep.outputs", "duplicate entries")
    outputs = tuple(o for o in OUTPUTS if o in outputs)

    if var == "distance_grid":
        for k in ("start", "stop", "step"):
            if k in t:
                raise ScenarioError(_join(path, k), "not used by the distance_grid axis; set points")
        if outputs != ("rate",):
            raise ScenarioError("sweep.outputs", "the distance_grid axis only produces rate")
        return SweepAxis(var, points=_integer(t, "points", path, default=11, lo=2), unit=unit, outputs=outputs)

    if "points" in t:
        raise ScenarioError("sweep.points", f"only used by the distance_grid axis, not {var}")
    lo = {"pt_over_n0_dB": None, "ris_elements": 1.0, "jitter_variance_m2": 0.0, "rician_K": 0.0}[var]
    start = _real(t, "start", path, lo=lo)
    stop = _real(t, "stop", path, lo=lo)
    step = _real(t, "step", path, lo=0.0, lo_open=True)
    if stop < start:
        raise ScenarioError("sweep.stop", f"must be >= start ({start:g}), got {stop:g}")
    axis = SweepAxis(var, start, stop, step, unit=unit, outputs=outputs)
    if var == "ris_elements":
        if not start.is_integer():
            raise ScenarioError("sweep.start", "element count must be an integer")
        if any(abs(start * 2.0 ** (k * step) - n) > 1e-9 * n for k, n in enumerate(axis.values())):
            raise ScenarioError("sweep.step", "doubling steps must land on integer element counts")
    if len(axis.values()) > 100_000:
        raise ScenarioError("sweep.step", "sweep has more than 100000 points")
    return axis


def _scenario_from_dict(doc: dict) -> Scenario:
    _check_keys(doc, {"name", "constellation", "antenna", "rician_K", "jitter_variance_m2", "pt_over_n0_dB",
                      "footprint", "topology", "sweep", "rate_mode", "mc"}, "")
    if "sweep" not in doc:
        raise ScenarioError("sweep", "missing required table")
    name = doc.get("name", "scenario")
    if not isinstance(name, str) or not name:
        raise ScenarioError("name", "expected a nonempty string")

    ant_t = _table(doc, "antenna")
    _check_keys(ant_t, {"carrier_frequency_Hz", "gain_dBi"}, "antenna")
    antenna = AntennaConfig(
        carrier_frequency_Hz=_real(ant_t, "carrier_frequency_Hz", "antenna", default=350e9, lo=0.0, lo_open=True),
        gain_dBi=_real(ant_t, "gain_dBi", "antenna", default=30.0),
    )

    fp_t = _table(doc, "footprint")
    _check_keys(fp_t, {"model", "radius_m"}, "footprint")
    model = _choice(fp_t, "model", "footprint", FOOTPRINT_MODELS, "fixed")
    if model == "gaussian" and "radius_m" in fp_t:
        raise ScenarioError("footprint.radius_m", "only used by the fixed footprint model")
    footprint = FootprintConfig(
        model=model,
        radius_m=_real(fp_t, "radius_m", "footprint", default=DEFAULT_FOOTPRINT_RADIUS_M, lo=0.0, lo_open=True),
    )

    top_t = _table(doc, "topology")
    path = "topology"
    _check_keys(top_t, {"kind", "ris_elements", "relays", "hops", "ris_efficiency", "hop_distance"}, path)
    eff = _real(top_t, "ris_efficiency", path, default=1.0, lo=0.0, lo_open=True)
    if eff > 1.0:
        raise ScenarioError("topology.ris_efficiency", f"must be <= 1, got {eff:g}")
    topology = TopologyConfig(
        kind=_choice(top_t, "kind", path, TOPOLOGY_KINDS, "single"),
        ris_elements=_integer(top_t, "ris_elements", path, default=1024),
        relays=_integer(top_t, "relays", path, default=2),
        hops=_integer(top_t, "hops", path, default=2),
        ris_efficiency=eff,
        hop_distance=_choice(top_t, "hop_distance", path, HOP_DISTANCES, "intra"),
    )

    mc = None
    if "mc" in doc:
        mc_t = _table(doc, "mc")
        _check_keys(mc_t, {"trials", "seed", "batch_size", "workers"}, "mc")
        seed = _integer(mc_t, "seed", "mc", default=0, lo=0)
        if seed >= 2**64:
            raise ScenarioError("mc.seed", "must fit in 64 bits")
        mc = McConfig(
            trials=_integer(mc_t, "trials", "mc", default=100_000),
            seed=seed,
            batch_size=_integer(mc_t, "batch_size", "mc", default=16_384),
            workers=_integer(mc_t, "workers", "mc", default=1),
        )

    sweep = _sweep(_table(doc, "sweep"))
    if sweep.variable == "distance_grid" and not (topology.kind == "simultaneous" and topology.relays == 2):
        raise ScenarioError("topology.kind", "the distance_grid axis needs a simultaneous topology with 2 relays")

    return Scenario(
        sweep=sweep,
        name=name,
        constellation=_constellation(doc.get("constellation", "starlink")),
        antenna=antenna,
        rician_K=_real(doc, "rician_K", "", default=10.0, lo=0.0),
        jitter_variance_m2=_real(doc, "jitter_variance_m2", "", default=1.0, lo=0.0),
        pt_over_n0_dB=_real(doc, "pt_over_n0_dB", "", default=500.0),
        footprint=footprint,
        topology=topology,
        rate_mode=_choice(doc, "rate_mode", "", RATE_MODES, "mean_snr"),
        mc=mc,
    )


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document, applying defaults."""
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ScenarioError("", f"malformed scenario document: {exc}") from None
    return _scenario_from_dict(doc)


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


# --- serialisation ----------------------------------------------------------

def scenario_to_dict(s: Scenario) -> dict:
    def clean(obj):
        return {k: v for k, v in dataclasses.asdict(obj).items() if v is not None}

    sweep = clean(s.sweep)
    sweep["outputs"] = list(s.sweep.outputs)
    if not sweep["unit"]:
        del sweep["unit"]
    fp = clean(s.footprint)
    if s.footprint.model == "gaussian":
        del fp["radius_m"]
    doc = {
        "name": s.name,
        "constellation": s.constellation if isinstance(s.constellation, str) else clean(s.constellation),
        "rician_K": s.rician_K,
        "jitter_variance_m2": s.jitter_variance_m2,
        "pt_over_n0_dB": s.pt_over_n0_dB,
        "rate_mode": s.rate_mode,
        "antenna": clean(s.antenna),
        "footprint": fp,
        "topology": clean(s.topology),
        "sweep": sweep,
    }
    if s.mc is not None:
        doc["mc"] = clean(s.mc)
    return doc


def serialize_scenario(s: Scenario) -> str:
    """Canonical TOML text; ``parse_scenario`` inverts it exactly."""
    return tomli_w.dumps(scenario_to_dict(s))


def scenario_hash(s: Scenario) -> str:
    return hashlib.sha256(serialize_scenario(s).encode()).hexdigest()[:16]


# --- model construction -----------------------------------------------------

def hop_distance_m(s: Scenario) -> float:
    ds = distance_set(s.constellation_spec)
    km = {"intra": ds.d_intra_km, "nearest": ds.d_nearest_km, "farthest": ds.d_farthest_km}[s.topology.hop_distance]
    return km * 1e3


def build_topology(s: Scenario, ris_elements: int | None = None, jitter_variance_m2: float | None = None,
                   rician_K: float | None = None):
    """Topology for the scenario, with optional per-row overrides."""
    top = s.topology
    n = top.ris_elements if ris_elements is None else ris_elements
    jitter = s.jitter_variance_m2 if jitter_variance_m2 is None else jitter_variance_m2
    ric = RicianConfig(s.rician_K if rician_K is None else rician_K)
    d = hop_distance_m(s)
    if top.kind == "consecutive":
        # one element-to-element path loss, reused for every hop count
        pl = free_space_path_loss(LinkBudget(d, d, 1, s.antenna, top.ris_efficiency))
        return ConsecutiveTopology(top.hops, n, pl, ric)
    mis = misalignment_params(s.antenna, d, jitter, s.footprint.r_d_m())
    link = LinkBudget(d, d, n, s.antenna, top.ris_efficiency)
    if top.kind == "single":
        return SingleTopology(link, mis, ric)
    return SimultaneousTopology(tuple(RisBranch(link, mis, mis) for _ in range(top.relays)), ric)

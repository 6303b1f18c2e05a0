"""Shared helpers for the experiment scripts."""

import warnings
from pathlib import Path

from risisl.constellation import distance_set, preset
from risisl.fading import RicianConfig
from risisl.link import LinkBudget, amplitude_stats_single
from risisl.misalignment import DEFAULT_FOOTPRINT_RADIUS_M, AntennaConfig, misalignment_params
from risisl.multi_ris import SingleTopology

RESULTS = Path(__file__).resolve().parent.parent / "results"
ANT = AntennaConfig()


def out_path(name: str) -> Path:
    RESULTS.mkdir(exist_ok=True)
    return RESULTS / name


def d_intra_m(name: str) -> float:
    return distance_set(preset(name)).d_intra_km * 1e3


def single(name="starlink", n=1024, jitter=1.0, K=10.0, r_d=DEFAULT_FOOTPRINT_RADIUS_M):
    d = d_intra_m(name)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mis = misalignment_params(ANT, d, jitter, r_d_m=r_d)
    return SingleTopology(LinkBudget(d, d, n, ANT), mis, RicianConfig(K))


def single_stats(*args, **kw):
    t = single(*args, **kw)
    return amplitude_stats_single(t.link, t.misalignment, t.rician)

"""Intra-plane, nearest and farthest inter-satellite distances for both presets."""

from risisl.constellation import PRESETS, distance_set
from risisl.results import SweepResult, emit_csv

from _common import out_path

r = SweepResult(columns=("preset", "altitude_km", "sats_per_orbit", "orbit_count",
                         "d_intra_km", "d_nearest_km", "d_farthest_km"))
for name, spec in sorted(PRESETS.items()):
    ds = distance_set(spec)
    r.rows.append((name, spec.altitude_km, spec.sats_per_orbit, spec.orbit_count,
                   ds.d_intra_km, ds.d_nearest_km, ds.d_farthest_km))
    print(f"{name:>9}: intra {ds.d_intra_km:9.2f} km  nearest {ds.d_nearest_km:9.2f} km  "
          f"farthest {ds.d_farthest_km:9.2f} km")
emit_csv(r, out_path("table1_geometry.csv"))

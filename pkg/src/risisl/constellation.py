"""Inter-satellite distances for a circular LEO shell.

Three distances bound every link geometry used elsewhere in the package:
the constant spacing of neighbours in one orbit, and the closest and
farthest separations between satellites in adjacent orbital planes.
Distances are in km; angles are handled in radians internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_KM = 6378.0


@dataclass(frozen=True)
class ConstellationSpec:
    altitude_km: float
    sats_per_orbit: int
    orbit_count: int
    earth_radius_km: float = EARTH_RADIUS_KM

    def __post_init__(self):
        if not self.altitude_km > 0:
            raise ValueError(f"altitude_km must be > 0, got {self.altitude_km}")
        if int(self.sats_per_orbit) != self.sats_per_orbit or self.sats_per_orbit < 2:
            raise ValueError(f"sats_per_orbit must be an integer >= 2, got {self.sats_per_orbit}")
        if int(self.orbit_count) != self.orbit_count or self.orbit_count < 2:
            raise ValueError(f"orbit_count must be an integer >= 2, got {self.orbit_count}")
        if not self.earth_radius_km > 0:
            raise ValueError(f"earth_radius_km must be > 0, got {self.earth_radius_km}")

    @property
    def orbit_radius_km(self) -> float:
        return self.earth_radius_km + self.altitude_km

    @property
    def theta_rad(self) -> float:
        """Angular spacing of neighbouring satellites in one orbit."""
        return 2.0 * math.pi / self.sats_per_orbit

    @property
    def psi_rad(self) -> float:
        """Angle between adjacent orbital planes."""
        return math.pi / self.orbit_count

    @property
    def theta_deg(self) -> float:
        return 360.0 / self.sats_per_orbit

    @property
    def psi_deg(self) -> float:
        return 180.0 / self.orbit_count


PRESETS = {
    "iridium": ConstellationSpec(altitude_km=781.0, sats_per_orbit=11, orbit_count=6),
    "starlink": ConstellationSpec(altitude_km=1150.0, sats_per_orbit=50, orbit_count=32),
}


def preset(name: str) -> ConstellationSpec:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown constellation preset {name!r}; choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class DistanceSet:
    d_intra_km: float
    d_nearest_km: float
    d_farthest_km: float


def _law_of_sines_chord(radius: float, angle: float) -> float:
    # isosceles triangle with apex angle `angle`; base angles (pi - angle) / 2
    phi = (math.pi - angle) / 2.0
    return radius * math.sin(angle) / math.sin(phi)


def intra_plane_distance(spec: ConstellationSpec) -> float:
    """Separation of adjacent satellites in the same orbit (km)."""
    return _law_of_sines_chord(spec.orbit_radius_km, spec.theta_rad)


def nearest_distance(spec: ConstellationSpec) -> float:
    """Closest approach between satellites of neighbouring planes (km).

    One satellite sits over a pole; its neighbour in the adjacent plane is
    half a spacing away along that plane.
    """
    return _law_of_sines_chord(spec.orbit_radius_km, spec.theta_rad / 2.0)


def farthest_from_angles(radius: float, theta: float, psi: float) -> float:
    """Farthest inter-plane distance for explicit spacing/plane angles (radians)."""
    half_chord = _law_of_sines_chord(radius, theta) / 2.0
    if half_chord > radius:
        raise ValueError("half intra-plane chord exceeds orbit radius")
    op = math.sqrt(radius**2 - half_chord**2)
    d_sp_sq = radius**2 + op**2 - 2.0 * radius * op * math.cos(psi)
    # law of cosines can go a hair negative at psi=0 through rounding
    d_sp_sq = max(d_sp_sq, 0.0)
    return math.sqrt(d_sp_sq + half_chord**2)


def farthest_distance(spec: ConstellationSpec) -> float:
    """Largest separation between satellites of neighbouring planes (km).

    Occurs when one satellite crosses the equator midway between two
    satellites of the adjacent plane.
    """
    return farthest_from_angles(spec.orbit_radius_km, spec.theta_rad, spec.psi_rad)


def distance_set(spec: ConstellationSpec) -> DistanceSet:
    return DistanceSet(
        d_intra_km=intra_plane_distance(spec),
        d_nearest_km=nearest_distance(spec),
        d_farthest_km=farthest_distance(spec),
    )

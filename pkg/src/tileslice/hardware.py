"""Conversion of fault-tolerant resources (tiles, slices) into physical
space and time for a concrete hardware platform."""

from __future__ import annotations

import json
from dataclasses import dataclass


class HardwareProfileError(ValueError):
    pass


@dataclass(frozen=True)
class HardwareProfile:
    """Hardware scalars: seconds per error-correction round and the area of
    one tile, tabulated by code distance. A logical time-slice takes d
    rounds, so the slice duration is d2 * t_round."""

    name: str
    t_round_s: float
    tile_area_m2: dict[int, float]

    def __post_init__(self):
        if self.t_round_s <= 0:
            raise HardwareProfileError("t_round_s must be positive")

    def tile_area(self, distance: int) -> float:
        try:
            return self.tile_area_m2[distance]
        except KeyError:
            raise HardwareProfileError(
                f"profile {self.name!r} has no tile area for distance {distance}; "
                f"known distances: {sorted(self.tile_area_m2)}"
            ) from None

    @staticmethod
    def from_json(text: str) -> "HardwareProfile":
        raw = json.loads(text)
        areas = {int(k): float(v) for k, v in raw["tile_area_m2"].items()}
        return HardwareProfile(raw.get("name", "custom"), float(raw["t_round_s"]), areas)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "t_round_s": self.t_round_s,
                "tile_area_m2": {str(k): v for k, v in sorted(self.tile_area_m2.items())},
            },
            indent=2,
        ) + "\n"


def trapped_ion_profile() -> HardwareProfile:
    """Published trapped-ion scalars: 9.613e-3 s per round and 1.13e-3 m^2
    per tile at distance 19. Other distances need user-supplied entries."""
    return HardwareProfile("trapped-ion", 9.613e-3, {19: 1.13e-3})


@dataclass(frozen=True)
class PhysicalCost:
    slice_seconds: float  # tau_0
    total_seconds: float
    total_area_m2: float

    def to_dict(self) -> dict:
        return {
            "slice_seconds": self.slice_seconds,
            "total_seconds": self.total_seconds,
            "total_area_m2": self.total_area_m2,
        }


def to_physical(d2: int, tau_total: float, n_total: float,
                hw: HardwareProfile) -> PhysicalCost:
    """Scale slices to seconds and tiles to square meters."""
    tau0 = d2 * hw.t_round_s
    return PhysicalCost(
        slice_seconds=tau0,
        total_seconds=tau_total * tau0,
        total_area_m2=n_total * hw.tile_area(d2),
    )

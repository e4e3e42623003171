"""Core vocabulary types: slice kinds, variant ids, objective parameters.

Everything here is immutable after construction and safe to share across
threads. Units are fixed package-wide: latencies in milliseconds, durations
in seconds, energy in watt-hours, carbon intensity in gCO2/kWh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

from .errors import CarbonSchedError

# Model variants are ordinals 1..V, 1 = lowest quality.
VariantId = int

# Grid carbon intensity in gCO2 per kWh.
CarbonIntensity = float


class SliceType(IntEnum):
    """The five MIG slice kinds, valued by their compute-unit share.

    Integer value equals the number of compute units, so ordinary integer
    comparison gives the size order 7g > 4g > 3g > 2g > 1g.
    """

    S7G = 7
    S4G = 4
    S3G = 3
    S2G = 2
    S1G = 1

    @property
    def label(self) -> str:
        return f"{int(self)}g"

    @classmethod
    def from_label(cls, label: str) -> "SliceType":
        try:
            return cls(int(label.rstrip("g")))
        except ValueError:
            raise CarbonSchedError(f"unknown slice type {label!r}") from None

    @property
    def compute_units(self) -> int:
        return int(self)


# Canonical ordering of slice types within a GPU: largest first. Fixing this
# makes FleetConfig <-> ConfigGraph round trips deterministic.
SLICE_ORDER: tuple[SliceType, ...] = (
    SliceType.S7G,
    SliceType.S4G,
    SliceType.S3G,
    SliceType.S2G,
    SliceType.S1G,
)


@dataclass(frozen=True)
class ObjectiveParams:
    """Parameters of the accuracy/carbon objective and the SLA constraint.

    carbon_weight is the trade-off knob in [0,1]: 1 = carbon only,
    0 = accuracy only. It is clamped at construction. base_accuracy and
    base_carbon_g are the reference points of the relative metrics: the
    accuracy of an all-highest-variant fleet and its per-request operational
    carbon in gCO2. latency_slo_ms is the p95 tail-latency bound every
    deployed configuration must meet.
    """

    base_accuracy: float
    base_carbon_g: float
    latency_slo_ms: float
    carbon_weight: float = 0.5
    pue: float = 1.5

    def __post_init__(self) -> None:
        for name in ("base_accuracy", "base_carbon_g", "latency_slo_ms",
                     "carbon_weight", "pue"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise CarbonSchedError(f"{name} must be finite, got {v}")
        if not 0.0 < self.base_accuracy <= 1.0:
            raise CarbonSchedError(
                f"base_accuracy must be in (0,1], got {self.base_accuracy}")
        if self.base_carbon_g <= 0:
            raise CarbonSchedError(
                f"base_carbon_g must be positive, got {self.base_carbon_g}")
        if self.latency_slo_ms <= 0:
            raise CarbonSchedError(
                f"latency_slo_ms must be positive, got {self.latency_slo_ms}")
        if self.pue < 1.0:
            raise CarbonSchedError(f"pue must be >= 1, got {self.pue}")
        # Clamp rather than reject: the weight is a preference, and callers
        # sweeping it programmatically should not have to guard the edges.
        clamped = min(1.0, max(0.0, self.carbon_weight))
        object.__setattr__(self, "carbon_weight", clamped)


_MASK64 = (1 << 64) - 1


def derive_seed(*parts: int) -> int:
    """Deterministically mix integers into a 63-bit seed (splitmix-style).

    Used wherever a component needs its own reproducible random stream
    derived from a user seed plus a position (tick index, candidate index).
    """
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h = (h ^ (p & _MASK64)) * 0xBF58476D1CE4E5B9 & _MASK64
        h ^= h >> 31
        h = h * 0x94D049BB133111EB & _MASK64
    return h & ((1 << 63) - 1)

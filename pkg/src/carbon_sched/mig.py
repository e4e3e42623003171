"""MIG partition geometry: the 19 legal per-GPU configurations.

The table follows the NVIDIA A100-40GB MIG geometry (5 slice kinds, at most
7 compute units per GPU, 19 allowed partition layouts). It is shipped as
data and can be overridden from a JSON file for other GPU generations.

Fleet feasibility ("can this multiset of slices be produced by n GPUs?") is
decided by exhaustive backtracking over the table. Fleets are small (tens of
GPUs), so exactness is cheap and there is no reason to use a heuristic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from collections import Counter
from typing import Iterable, Mapping, Optional, Sequence

from .core import SLICE_ORDER, SliceType, VariantId
from .errors import CarbonSchedError, InvalidConfigError

MigConfigId = int

# Per-GPU partition layouts, id -> slice kinds (canonical order, largest
# first). Rows 1, 3, 10 and 19 are the documented A100 anchors
# ({7g}, {4g,2g,1g}, {3g,2g,1g,1g}, {1g x 7}); the remaining rows cover the
# other placement-valid layouts, including partially filled ones, which is
# what lets a fleet move between slice kinds one slice at a time.
_DEFAULT_CONFIGS: dict[int, tuple[str, ...]] = {
    1: ("7g",),
    2: ("4g", "3g"),
    3: ("4g", "2g", "1g"),
    4: ("4g", "1g", "1g", "1g"),
    5: ("4g", "2g"),
    6: ("4g", "1g", "1g"),
    7: ("4g",),
    8: ("3g", "3g"),
    9: ("3g", "2g", "2g"),
    10: ("3g", "2g", "1g", "1g"),
    11: ("3g", "2g", "1g"),
    12: ("3g", "1g", "1g", "1g", "1g"),
    13: ("3g",),
    14: ("2g", "2g", "2g", "1g"),
    15: ("2g", "2g", "1g", "1g", "1g"),
    16: ("2g", "1g", "1g", "1g", "1g", "1g"),
    17: ("2g",),
    18: ("1g", "1g", "1g"),
    19: ("1g",) * 7,
}

# Memory capacity per slice kind, GB, for a 40 GB device. 3g and 4g share
# the half-memory tier per the A100 layout; only the 1g=5GB point is a hard
# anchor, the rest is standard geometry and overridable.
_DEFAULT_MEMORY_GB: dict[str, float] = {
    "7g": 40.0,
    "4g": 20.0,
    "3g": 20.0,
    "2g": 10.0,
    "1g": 5.0,
}

MAX_SLICES_PER_GPU = 7


@dataclass(frozen=True)
class SliceSpec:
    slice: SliceType
    compute_units: int
    memory_gb: float


# A slice multiset is stored as a count vector in SLICE_ORDER, i.e.
# (n_7g, n_4g, n_3g, n_2g, n_1g). Compact and hashable, which matters
# because feasibility results are memoized on it.
SliceVector = tuple[int, int, int, int, int]

_SLICE_INDEX = {s: i for i, s in enumerate(SLICE_ORDER)}


def to_slice_vector(slices: Iterable[SliceType]) -> SliceVector:
    vec = [0, 0, 0, 0, 0]
    for s in slices:
        vec[_SLICE_INDEX[s]] += 1
    return tuple(vec)  # type: ignore[return-value]


def from_slice_vector(vec: SliceVector) -> tuple[SliceType, ...]:
    out: list[SliceType] = []
    for s, count in zip(SLICE_ORDER, vec):
        out.extend([s] * count)
    return tuple(out)


class MigTopology:
    """The partition table plus slice specs for one GPU generation."""

    def __init__(self, configs: Mapping[int, Sequence[SliceType]],
                 memory_gb: Mapping[SliceType, float]):
        if not configs:
            raise InvalidConfigError("topology needs at least one configuration")
        self._configs: dict[int, tuple[SliceType, ...]] = {}
        for cid, slices in configs.items():
            if not slices:
                raise InvalidConfigError(f"configuration {cid} is empty")
            ordered = tuple(sorted(slices, reverse=True))
            if len(ordered) > MAX_SLICES_PER_GPU:
                raise InvalidConfigError(
                    f"configuration {cid} has more than "
                    f"{MAX_SLICES_PER_GPU} slices")
            if sum(s.compute_units for s in ordered) > MAX_SLICES_PER_GPU:
                raise InvalidConfigError(
                    f"configuration {cid} exceeds the per-GPU compute budget")
            self._configs[int(cid)] = ordered
        self._memory = {s: float(memory_gb[s]) for s in SLICE_ORDER}
        for s in SLICE_ORDER:
            if self._memory[s] <= 0:
                raise InvalidConfigError(f"memory for {s.label} must be positive")
        # Count vectors per config, used by the feasibility search.
        self._config_vectors: list[tuple[int, SliceVector]] = sorted(
            (cid, to_slice_vector(slices))
            for cid, slices in self._configs.items()
        )
        self._feasible_cache: dict[tuple[SliceVector, int, int], Optional[tuple[int, ...]]] = {}

    @property
    def config_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self._configs))

    def config_slices(self, config_id: MigConfigId) -> tuple[SliceType, ...]:
        """Slice kinds of one partition layout, largest first."""
        try:
            return self._configs[config_id]
        except KeyError:
            raise InvalidConfigError(
                f"unknown MIG configuration id {config_id}") from None

    def slice_memory(self, slice_type: SliceType) -> float:
        return self._memory[slice_type]

    def slice_spec(self, slice_type: SliceType) -> SliceSpec:
        return SliceSpec(slice_type, slice_type.compute_units,
                         self._memory[slice_type])

    def _partition_search(self, remaining: SliceVector, n: int,
                          min_idx: int) -> Optional[tuple[int, ...]]:
        """First partition of `remaining` into n config rows, or None.

        Parts are taken in ascending config-id order and the id sequence is
        kept non-decreasing, so the first solution is canonical. Memoized.
        """
        if n == 0:
            return () if not any(remaining) else None
        total = sum(remaining)
        if total < n or total > n * MAX_SLICES_PER_GPU:
            return None
        key = (remaining, n, min_idx)
        cached = self._feasible_cache.get(key, "miss")
        if cached != "miss":
            return cached  # type: ignore[return-value]
        result: Optional[tuple[int, ...]] = None
        for idx in range(min_idx, len(self._config_vectors)):
            cid, vec = self._config_vectors[idx]
            if all(r >= c for r, c in zip(remaining, vec)):
                rest = tuple(r - c for r, c in zip(remaining, vec))
                sub = self._partition_search(rest, n - 1, idx)  # type: ignore[arg-type]
                if sub is not None:
                    result = (cid,) + sub
                    break
        self._feasible_cache[key] = result
        return result

    def partition_fleet(self, slices: Iterable[SliceType],
                        n: int) -> Optional[tuple[int, ...]]:
        """Config ids (one per GPU, ascending) realizing the multiset, or None."""
        if n < 1:
            return None
        return self._partition_search(to_slice_vector(slices), n, 0)

    def is_feasible_fleet(self, slices: Iterable[SliceType], n: int) -> bool:
        """True iff the slice multiset splits into exactly n table rows."""
        return self.partition_fleet(slices, n) is not None

    def to_json_dict(self) -> dict:
        return {
            "configs": {str(cid): [s.label for s in slices]
                        for cid, slices in sorted(self._configs.items())},
            "memory_gb": {s.label: self._memory[s] for s in SLICE_ORDER},
        }


def _build_default_topology() -> MigTopology:
    configs = {cid: tuple(SliceType.from_label(l) for l in labels)
               for cid, labels in _DEFAULT_CONFIGS.items()}
    memory = {SliceType.from_label(l): gb for l, gb in _DEFAULT_MEMORY_GB.items()}
    return MigTopology(configs, memory)


DEFAULT_TOPOLOGY = _build_default_topology()


def load_topology(path: str) -> MigTopology:
    """Read a topology override file (JSON: configs + memory_gb sections)."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        configs = {
            int(cid): tuple(SliceType.from_label(l) for l in labels)
            for cid, labels in raw["configs"].items()
        }
        memory = {SliceType.from_label(l): float(gb)
                  for l, gb in raw["memory_gb"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidConfigError(f"malformed topology file {path}: {exc}") from exc
    missing = [s.label for s in SLICE_ORDER if s not in memory]
    if missing:
        raise InvalidConfigError(f"topology file lacks memory for {missing}")
    return MigTopology(configs, memory)


# -- module-level conveniences over the default topology ---------------------

def config_slices(config_id: MigConfigId,
                  topology: MigTopology = DEFAULT_TOPOLOGY) -> tuple[SliceType, ...]:
    return topology.config_slices(config_id)


def slice_memory(slice_type: SliceType,
                 topology: MigTopology = DEFAULT_TOPOLOGY) -> float:
    return topology.slice_memory(slice_type)


def is_feasible_fleet(slices: Iterable[SliceType], n: int,
                      topology: MigTopology = DEFAULT_TOPOLOGY) -> bool:
    return topology.is_feasible_fleet(slices, n)


@dataclass(frozen=True)
class FleetConfig:
    """A concrete fleet deployment: per-GPU partition ids plus per-slice variants.

    `assignments` lists one variant per slice, ordered by GPU index and then
    by the canonical (largest-first) slice order within each GPU. Lengths are
    validated against the topology at construction.
    """

    partitions: tuple[MigConfigId, ...]
    assignments: tuple[VariantId, ...]

    def __init__(self, partitions: Sequence[MigConfigId],
                 assignments: Sequence[VariantId],
                 topology: MigTopology = DEFAULT_TOPOLOGY):
        object.__setattr__(self, "partitions", tuple(int(p) for p in partitions))
        object.__setattr__(self, "assignments", tuple(int(v) for v in assignments))
        object.__setattr__(self, "_topology", topology)
        if len(self.partitions) < 1:
            raise CarbonSchedError("a fleet needs at least one GPU")
        expected = sum(len(topology.config_slices(p)) for p in self.partitions)
        if len(self.assignments) != expected:
            raise CarbonSchedError(
                f"assignment length {len(self.assignments)} does not match the "
                f"{expected} slices implied by the partitions")
        if any(v < 1 for v in self.assignments):
            raise CarbonSchedError("variant ordinals start at 1")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FleetConfig):
            return NotImplemented
        return (self.partitions == other.partitions
                and self.assignments == other.assignments)

    def __hash__(self) -> int:
        return hash((self.partitions, self.assignments))

    @property
    def topology(self) -> MigTopology:
        return self._topology  # type: ignore[attr-defined]

    @property
    def n_gpus(self) -> int:
        return len(self.partitions)

    @property
    def n_instances(self) -> int:
        return len(self.assignments)

    def slices(self) -> tuple[tuple[int, SliceType], ...]:
        """(gpu_index, slice_type) in canonical order."""
        out: list[tuple[int, SliceType]] = []
        for g, pid in enumerate(self.partitions):
            out.extend((g, s) for s in self.topology.config_slices(pid))
        return tuple(out)

    def instances(self) -> tuple[tuple[int, SliceType, VariantId], ...]:
        """(gpu_index, slice_type, variant) per service instance."""
        return tuple((g, s, v)
                     for (g, s), v in zip(self.slices(), self.assignments))

    def slice_counts(self) -> Counter:
        return Counter(s for _, s in self.slices())

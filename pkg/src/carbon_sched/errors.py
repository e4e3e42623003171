"""Exception types shared across the package."""


class CarbonSchedError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidConfigError(CarbonSchedError):
    """A MIG configuration id is unknown or a partition table row is malformed."""


class InfeasibleAssignmentError(CarbonSchedError):
    """A model variant was assigned to a slice it cannot fit on (memory)."""


class IncompatibleGraphsError(CarbonSchedError):
    """Two configuration graphs over different variant catalogs were combined."""


class InfeasibleGraphError(CarbonSchedError):
    """A configuration graph has no realization on the given GPU fleet."""


class NoNeighborError(CarbonSchedError):
    """No legal neighbor exists for the given configuration graph."""


class ProfileError(CarbonSchedError):
    """A performance profile file is malformed or violates an invariant."""


class TraceError(CarbonSchedError):
    """A carbon-intensity trace file is malformed."""


class SimulationError(CarbonSchedError):
    """The serving simulator was given an unusable fleet or workload."""

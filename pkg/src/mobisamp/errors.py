"""Exception types shared across the package.

All errors derive from ValueError so callers that do not care about the
distinction can catch a single type.
"""


class MobisampError(ValueError):
    """Base class for all package-specific errors."""


class EmptyBandError(MobisampError):
    """No representable harmonic falls inside the requested band."""


class GridParseError(MobisampError):
    """A grid CSV file could not be parsed; message names row/column."""


class MonotonicityError(MobisampError):
    """A trajectory is not strictly monotone where it has to be."""


class RangeError(MobisampError):
    """A query falls outside the declared domain of an object."""


class LatticeError(MobisampError):
    """A sample lattice is incompatible with the periodic domain."""


class DivergenceError(MobisampError):
    """An aliased-noise replica sum does not converge."""


class ClosedFormError(MobisampError):
    """A closed-form expression is not applicable to the given inputs."""


class UndefinedMetricError(MobisampError):
    """A metric is undefined for the given inputs (e.g. zero reference)."""


class ConfigError(MobisampError):
    """An experiment configuration is malformed; message names the key path."""

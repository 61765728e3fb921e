"""Sensor trajectories: affine, parallel line sets, piecewise and perturbed paths.

Positions are in meters, times in seconds.  Piecewise paths are defined on
their knot span only; querying outside raises RangeError.  Perturbed paths add
per-segment sine wobbles that vanish at the knots, so continuity (and the knot
positions of the base path) are preserved by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import MonotonicityError, RangeError

_VALIDATION_GRID = 10_000

__all__ = [
    "AffinePath",
    "PiecewiseAffinePath",
    "PerturbedPath",
    "ParallelLineSet",
    "position",
    "inverse_time",
    "speed",
]


@dataclass(frozen=True)
class AffinePath:
    """Constant-speed motion x(t) = origin + speed * t, defined for all t."""

    speed: float
    origin: float = 0.0

    def __post_init__(self):
        if not self.speed > 0.0:
            raise MonotonicityError("affine path speed must be strictly positive")

    @property
    def max_speed(self) -> float:
        return self.speed

    def position(self, t):
        return self.origin + self.speed * np.asarray(t, dtype=float)

    def speed_at(self, t):
        return np.broadcast_to(self.speed, np.shape(t)).copy() if np.shape(t) \
            else self.speed


@dataclass(frozen=True)
class PiecewiseAffinePath:
    """Continuous path with constant speed on each knot interval.

    ``knots`` are strictly increasing times t_0 < ... < t_K; segment k runs at
    speed ``speeds[k] >= 0``.  The position at t_0 is ``origin``; knot
    positions follow by continuity.
    """

    knots: np.ndarray
    speeds: np.ndarray
    origin: float = 0.0

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float)
        speeds = np.asarray(self.speeds, dtype=float)
        if knots.ndim != 1 or knots.size < 2:
            raise ValueError("need at least two knot times")
        if np.any(np.diff(knots) <= 0):
            raise ValueError("knot times must be strictly increasing")
        if speeds.shape != (knots.size - 1,):
            raise ValueError("need one speed per knot interval")
        if np.any(speeds < 0):
            raise MonotonicityError("negative segment speed makes the path non-monotone")
        knots = knots.copy(); knots.flags.writeable = False
        speeds = speeds.copy(); speeds.flags.writeable = False
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "speeds", speeds)
        kpos = self.origin + np.concatenate(
            ([0.0], np.cumsum(speeds * np.diff(knots))))
        kpos.flags.writeable = False
        object.__setattr__(self, "_knot_positions", kpos)

    @property
    def knot_positions(self) -> np.ndarray:
        return self._knot_positions

    @property
    def durations(self) -> np.ndarray:
        return np.diff(self.knots)

    @property
    def max_speed(self) -> float:
        return float(np.max(self.speeds))

    @property
    def span(self) -> tuple:
        return float(self.knots[0]), float(self.knots[-1])

    def _segment_index(self, t: np.ndarray) -> np.ndarray:
        lo, hi = self.span
        if np.any(t < lo) or np.any(t > hi):
            raise RangeError("time outside the knot span [%g, %g]" % (lo, hi))
        idx = np.searchsorted(self.knots, t, side="right") - 1
        return np.clip(idx, 0, self.speeds.size - 1)

    def position(self, t):
        t = np.asarray(t, dtype=float)
        idx = self._segment_index(t)
        out = self._knot_positions[idx] + self.speeds[idx] * (t - self.knots[idx])
        return out if t.shape else float(out)

    def speed_at(self, t):
        t = np.asarray(t, dtype=float)
        idx = self._segment_index(t)
        out = self.speeds[idx]
        return out if t.shape else float(out)


@dataclass(frozen=True)
class PerturbedPath:
    """Base piecewise-affine path plus epsilon-scaled per-segment sine wobbles.

    ``wobbles[k]`` holds amplitudes a_1..a_J of sin(pi * j * tau / D_k) with
    tau the time into segment k of duration D_k; every wobble vanishes at both
    segment ends.  Construction validates strict monotonicity of the perturbed
    path on a dense grid.
    """

    base: PiecewiseAffinePath
    epsilon: float
    wobbles: tuple

    def __post_init__(self):
        if len(self.wobbles) != self.base.speeds.size:
            raise ValueError("need one wobble amplitude array per segment")
        frozen = []
        for amps in self.wobbles:
            arr = np.asarray(amps, dtype=float).copy()
            arr.flags.writeable = False
            frozen.append(arr)
        object.__setattr__(self, "wobbles", tuple(frozen))
        if self.epsilon != 0.0:
            lo, hi = self.base.span
            grid = np.linspace(lo, hi, _VALIDATION_GRID)
            v = self.speed_at(grid)
            if np.min(v) <= 0.0:
                raise MonotonicityError(
                    "perturbation destroys monotonicity (min speed %.3g)" % np.min(v))
        vbar = float(np.max(self.speed_at(
            np.linspace(*self.base.span, _VALIDATION_GRID))))
        object.__setattr__(self, "_max_speed", vbar)

    @property
    def knots(self) -> np.ndarray:
        return self.base.knots

    @property
    def span(self) -> tuple:
        return self.base.span

    @property
    def max_speed(self) -> float:
        """Largest speed observed on the dense validation grid."""
        return self._max_speed

    @property
    def perturbation_bandwidth(self) -> float:
        """Highest angular frequency (rad/s) present in any segment wobble."""
        best = 0.0
        for amps, dur in zip(self.wobbles, self.base.durations):
            nz = np.nonzero(amps)[0]
            if nz.size:
                best = max(best, np.pi * (nz[-1] + 1) / dur)
        return best

    def _wobble(self, idx: np.ndarray, tau: np.ndarray, derivative: bool) -> np.ndarray:
        out = np.zeros(tau.shape)
        durations = self.base.durations
        for k in np.unique(idx):
            amps = self.wobbles[k]
            if amps.size == 0:
                continue
            sel = idx == k
            j = np.arange(1, amps.size + 1)
            arg = np.pi * np.outer(tau[sel], j) / durations[k]
            if derivative:
                out[sel] = (np.cos(arg) * (np.pi * j / durations[k])) @ amps
            else:
                out[sel] = np.sin(arg) @ amps
        return out

    def position(self, t):
        t = np.asarray(t, dtype=float)
        scalar = not t.shape
        tt = np.atleast_1d(t)
        idx = self.base._segment_index(tt)
        base = self.base._knot_positions[idx] + self.base.speeds[idx] * (tt - self.base.knots[idx])
        out = base + self.epsilon * self._wobble(idx, tt - self.base.knots[idx], False)
        return float(out[0]) if scalar else out.reshape(t.shape)

    def speed_at(self, t):
        t = np.asarray(t, dtype=float)
        scalar = not t.shape
        tt = np.atleast_1d(t)
        idx = self.base._segment_index(tt)
        out = self.base.speeds[idx] + self.epsilon * self._wobble(
            idx, tt - self.base.knots[idx], True)
        return float(out[0]) if scalar else out.reshape(t.shape)


@dataclass(frozen=True)
class ParallelLineSet:
    """Sensors on parallel lines y = j * spacing moving at `speed` along +x.

    Sensor j sits at (speed * t, j * spacing) at time t, for j in
    [j_min, j_max].
    """

    spacing: float
    speed: float
    j_min: int = 0
    j_max: int = 0

    def __post_init__(self):
        if not self.spacing > 0.0:
            raise ValueError("line spacing must be strictly positive")
        if not self.speed > 0.0:
            raise ValueError("line speed must be strictly positive")
        if self.j_max < self.j_min:
            raise ValueError("empty line index range")

    @property
    def count(self) -> int:
        return self.j_max - self.j_min + 1

    @property
    def line_offsets(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1) * self.spacing

    def sensor_position(self, j: int, t):
        if not self.j_min <= j <= self.j_max:
            raise RangeError("line index %d outside [%d, %d]"
                             % (j, self.j_min, self.j_max))
        t = np.asarray(t, dtype=float)
        x = self.speed * t
        y = np.full_like(x, j * self.spacing)
        return np.stack([x, y], axis=-1)


def position(path, t):
    """Position of `path` at time(s) t."""
    return path.position(t)


def speed(path, t, with_flag: bool = False):
    """Instantaneous speed at time(s) t.

    At a knot the right-hand segment value is returned; with ``with_flag``
    the result is a pair ``(speed, at_knot)`` so callers can detect the
    one-sided resolution.
    """
    value = path.speed_at(t)
    if not with_flag:
        return value
    knots = getattr(path, "knots", None)
    if knots is None:
        flag = np.zeros(np.shape(t), dtype=bool) if np.shape(t) else False
    else:
        flag = np.isin(np.asarray(t, dtype=float), knots)
        if not np.shape(t):
            flag = bool(flag)
    return value, flag


def inverse_time(path, x, tol: float = 1e-13):
    """Time at which the strictly monotone `path` reaches position(s) x."""
    if isinstance(path, AffinePath):
        return (np.asarray(x, dtype=float) - path.origin) / path.speed
    if isinstance(path, PiecewiseAffinePath):
        if np.any(path.speeds == 0.0):
            raise MonotonicityError("zero-speed segment: position is not invertible")
        return _invert_piecewise(path, x)
    if isinstance(path, PerturbedPath):
        if np.any(path.base.speeds == 0.0):
            raise MonotonicityError("zero-speed segment: position is not invertible")
        return _invert_perturbed(path, x, tol)
    raise TypeError("cannot invert %r" % type(path).__name__)


def _locate_segments(kpos: np.ndarray, xx: np.ndarray, nseg: int) -> np.ndarray:
    if np.any(xx < kpos[0]) or np.any(xx > kpos[-1]):
        raise RangeError("position outside the path range [%g, %g]"
                         % (kpos[0], kpos[-1]))
    return np.clip(np.searchsorted(kpos, xx, side="right") - 1, 0, nseg - 1)


def _invert_piecewise(path: PiecewiseAffinePath, x):
    x = np.asarray(x, dtype=float)
    scalar = not x.shape
    xx = np.atleast_1d(x)
    kpos = path.knot_positions
    idx = _locate_segments(kpos, xx, path.speeds.size)
    t = path.knots[idx] + (xx - kpos[idx]) / path.speeds[idx]
    return float(t[0]) if scalar else t.reshape(x.shape)


def _invert_perturbed(path: PerturbedPath, x, tol: float):
    x = np.asarray(x, dtype=float)
    scalar = not x.shape
    xx = np.atleast_1d(x).ravel()
    # wobbles vanish at knots, so the base knot positions bracket each segment
    kpos = path.base.knot_positions
    idx = _locate_segments(kpos, xx, path.base.speeds.size)
    knots = path.base.knots
    out = np.empty_like(xx)
    for i, (xi, k) in enumerate(zip(xx, idx)):
        lo, hi = knots[k], knots[k + 1]
        if xi == kpos[k]:
            out[i] = lo
        elif xi == kpos[k + 1]:
            out[i] = hi
        else:
            out[i] = brentq(lambda t: path.position(t) - xi, lo, hi,
                            xtol=tol, rtol=8.9e-16)
    out = out.reshape(np.atleast_1d(x).shape)
    return float(out[0]) if scalar else out.reshape(x.shape)

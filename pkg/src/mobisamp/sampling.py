"""Sampling front end: sensor kernels, lattices, and sample acquisition.

Static sensors read the field pointwise on a rectangular lattice.  Mobile
sensors ride parallel lines at constant speed and read a spatially filtered
field at a fixed cadence, which lands their measurements on a rectangular
space lattice as well.  Nonuniformly moving sensors produce a time series in
warped time; a circular spectral low-pass then yields the band-limited series
that uniform-in-time sampling actually captures.

All acquisition routines are exact in the harmonic representation: kernels
multiply coefficients, lattice sampling folds wavenumbers modulo the grid
counts, and values come out of inverse FFTs.  No spatial quadrature is
involved, so sampled values match direct series evaluation to rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

import numpy as np
from scipy.special import sici

from .errors import LatticeError
from .fields import (HarmonicField, NoiseRealization, ObservedField,
                     centered_wavenumbers, fold_coefficients)
from .trajectories import ParallelLineSet

_REL_TOL = 1e-9

__all__ = [
    "SamplingKernel",
    "SampleLattice",
    "SampleSet",
    "MeasurementNoise",
    "kappa",
    "sample_static",
    "sample_mobile",
    "sample_mobile_1d",
    "sample_nonuniform",
    "add_measurement_noise",
    "export_samples_csv",
]


def _sinc_energy_integral(w):
    """Integral of sin(u)^2 / u^2 du from 0 to w, via the sine integral."""
    w = np.asarray(w, dtype=float)
    si, _ = sici(2.0 * w)
    safe = np.where(w == 0.0, 1.0, w)
    out = si - np.where(w == 0.0, 0.0, np.sin(w) ** 2 / safe)
    return out if out.shape else float(out)


def kappa(half_width: float, cutoff: float) -> float:
    """Normalizing gain of the box kernel of the given half width.

    Chosen so the kernel's squared response integrates to 2*cutoff over the
    passband [-cutoff, cutoff], the same in-band energy as the unit brick-wall
    response; kappa * half_width / pi -> 1 as the width shrinks.
    """
    if not half_width > 0.0:
        raise ValueError("box kernel half width must be strictly positive")
    if not cutoff > 0.0:
        raise ValueError("kernel cutoff must be strictly positive")
    g = _sinc_energy_integral(half_width * cutoff)
    return np.pi * np.sqrt(cutoff / (half_width * g))


def _as_field(nu) -> HarmonicField:
    """Resolve signal/noise containers to a plain harmonic field."""
    if isinstance(nu, HarmonicField):
        return nu
    if isinstance(nu, NoiseRealization):
        return nu.field
    if isinstance(nu, ObservedField):
        return nu.as_field()
    raise TypeError("cannot sample %r" % type(nu).__name__)


@dataclass(frozen=True)
class SamplingKernel:
    """Along-track sensor response applied before point sampling.

    kind "none"  : pointwise reading, unit response at every frequency.
    kind "ideal" : brick-wall response, 1 inside |omega| <= cutoff, else 0.
    kind "box"   : moving average over [-half_width, half_width] with gain
                   kappa chosen so the response energy over the passband
                   [-cutoff, cutoff] equals that of the ideal kernel.
    """

    kind: str
    cutoff: float = 0.0
    half_width: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "ideal", "box"):
            raise ValueError("unknown kernel kind %r" % (self.kind,))
        if self.kind in ("ideal", "box") and not self.cutoff > 0.0:
            raise ValueError("kernel cutoff must be strictly positive")
        if self.kind == "box" and not self.half_width > 0.0:
            raise ValueError("box kernel half width must be strictly positive")

    @classmethod
    def none(cls) -> "SamplingKernel":
        return cls("none")

    @classmethod
    def ideal(cls, cutoff: float) -> "SamplingKernel":
        return cls("ideal", cutoff=cutoff)

    @classmethod
    def box(cls, half_width: float, cutoff: float) -> "SamplingKernel":
        return cls("box", cutoff=cutoff, half_width=half_width)

    @property
    def gain(self) -> float:
        """Normalizing gain kappa of the box kernel (1.0 otherwise)."""
        if self.kind != "box":
            return 1.0
        return kappa(self.half_width, self.cutoff)

    def response(self, omega):
        """Frequency response evaluated at angular frequency array `omega`."""
        omega = np.asarray(omega, dtype=float)
        if self.kind == "none":
            out = np.ones(omega.shape)
        elif self.kind == "ideal":
            out = (np.abs(omega) <= self.cutoff * (1.0 + 1e-12)).astype(float)
        else:
            kappa = self.gain
            safe = np.where(omega == 0.0, 1.0, omega)
            out = np.where(
                omega == 0.0,
                kappa * self.half_width / np.pi,
                kappa * np.sin(self.half_width * safe) / (np.pi * safe))
        return out if out.shape else float(out)

    def band_energy(self, halfwidth: float) -> float:
        """Integral of response^2 over [-halfwidth, halfwidth]."""
        if self.kind == "none":
            return 2.0 * halfwidth
        if self.kind == "ideal":
            return 2.0 * min(halfwidth, self.cutoff)
        kappa = self.gain
        return 2.0 * kappa ** 2 * self.half_width / np.pi ** 2 \
            * _sinc_energy_integral(self.half_width * halfwidth)

    def describe(self) -> str:
        if self.kind == "none":
            return "none"
        if self.kind == "ideal":
            return "ideal:cutoff=%.17g" % self.cutoff
        return "box:half_width=%.17g,cutoff=%.17g" % (self.half_width, self.cutoff)


@dataclass(frozen=True)
class SampleLattice:
    """Finite point lattice offset + sum_i n_i * generator[i], 0 <= n_i < counts[i]."""

    generator: np.ndarray
    counts: tuple
    offset: np.ndarray

    def __post_init__(self):
        gen = np.array(self.generator, dtype=float)
        if gen.ndim != 2 or gen.shape[0] != gen.shape[1]:
            raise LatticeError("generator must be a square matrix")
        if abs(np.linalg.det(gen)) == 0.0:
            raise LatticeError("generator rows must be linearly independent")
        counts = tuple(int(n) for n in np.atleast_1d(self.counts))
        if len(counts) != gen.shape[0] or any(n < 1 for n in counts):
            raise LatticeError("need one positive count per generator row")
        off = np.array(self.offset, dtype=float).reshape(gen.shape[0])
        gen.flags.writeable = False
        off.flags.writeable = False
        object.__setattr__(self, "generator", gen)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "offset", off)

    @classmethod
    def axis_aligned(cls, spacings, counts, offset=None) -> "SampleLattice":
        spacings = np.atleast_1d(np.asarray(spacings, dtype=float))
        if offset is None:
            offset = np.zeros(spacings.size)
        return cls(np.diag(spacings), tuple(np.atleast_1d(counts)), offset)

    @property
    def dimension(self) -> int:
        return self.generator.shape[0]

    @property
    def is_axis_aligned(self) -> bool:
        return bool(np.all(self.generator == np.diag(np.diag(self.generator))))

    @property
    def spacings(self) -> np.ndarray:
        if not self.is_axis_aligned:
            raise LatticeError("spacings are defined for axis-aligned lattices only")
        return np.diag(self.generator)

    @property
    def cell_volume(self) -> float:
        return float(abs(np.linalg.det(self.generator)))

    def dual_generator(self) -> np.ndarray:
        """Rows d_j with <generator[i], d_j> = 2 pi delta_ij."""
        return 2.0 * np.pi * np.linalg.inv(self.generator).T

    def points(self) -> np.ndarray:
        """All lattice points, shape counts + (dimension,)."""
        grids = np.meshgrid(*[np.arange(n) for n in self.counts], indexing="ij")
        idx = np.stack(grids, axis=-1).astype(float)
        return self.offset + np.einsum("...i,ij->...j", idx, self.generator)


@dataclass(frozen=True)
class SampleSet:
    """Measurements plus enough provenance to reconstruct and audit them.

    `values` is indexed in lattice order (shape == lattice.counts) for static
    and mobile acquisitions; index order is (along-track, across-track) for
    mobile lines.  Nonuniform acquisitions store a flat time series.
    """

    kind: str
    values: np.ndarray
    kernel: SamplingKernel
    lattice: SampleLattice = None
    times: np.ndarray = None
    meta: MappingProxyType = None

    def __post_init__(self):
        if self.kind not in ("static", "mobile", "nonuniform"):
            raise ValueError("unknown sample kind %r" % (self.kind,))
        values = np.array(self.values, dtype=float)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.times is not None:
            times = np.array(self.times, dtype=float)
            times.flags.writeable = False
            object.__setattr__(self, "times", times)
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta or {})))
        if self.lattice is not None and self.values.shape != self.lattice.counts:
            raise LatticeError("values shape %r does not match lattice counts %r"
                               % (self.values.shape, self.lattice.counts))

    @property
    def count(self) -> int:
        return self.values.size


def _require_commensurate(spacing: float, count: int, length: float, what: str):
    if abs(spacing * count - length) > _REL_TOL * abs(length):
        raise LatticeError(
            "%s: spacing %.17g times count %d must equal the domain length %.17g"
            % (what, spacing, count, length))


def _base_meta(field: HarmonicField) -> dict:
    return {
        "lengths": field.lengths,
        "band": field.band,
        "source_kmax": field.kmax,
    }


def sample_static(nu, lattice, offset=None) -> SampleSet:
    """Pointwise readings on a rectangular lattice commensurate with the torus.

    `nu` may be a HarmonicField, NoiseRealization or ObservedField.  `lattice`
    may be a SampleLattice (axis aligned) or a tuple of per-axis counts, in
    which case spacings length/count and the given offset are used.
    """
    field = _as_field(nu)
    if not isinstance(lattice, SampleLattice):
        counts = tuple(int(n) for n in np.atleast_1d(lattice))
        if len(counts) != field.dimension:
            raise LatticeError("need one count per field axis")
        spacings = [L / n for L, n in zip(field.lengths, counts)]
        lattice = SampleLattice.axis_aligned(
            spacings, counts,
            np.zeros(field.dimension) if offset is None else offset)
    elif offset is not None:
        raise ValueError("pass the offset inside the lattice")
    if not lattice.is_axis_aligned:
        raise LatticeError("static sampling expects an axis-aligned lattice")
    if lattice.dimension != field.dimension:
        raise LatticeError("lattice dimension does not match the field")
    for ax, (h, n, L) in enumerate(zip(lattice.spacings, lattice.counts,
                                       field.lengths)):
        _require_commensurate(h, n, L, "axis %d" % ax)

    coeffs = field.coeffs.copy()
    for ax, (L, delta) in enumerate(zip(field.lengths, lattice.offset)):
        if delta != 0.0:
            k = centered_wavenumbers(coeffs.shape[ax])
            phase = np.exp(2j * np.pi * k * delta / L)
            shape = [1] * coeffs.ndim
            shape[ax] = k.size
            coeffs = coeffs * phase.reshape(shape)
    folded = fold_coefficients(coeffs, lattice.counts)
    values = np.fft.ifftn(folded).real * np.prod(lattice.counts)
    return SampleSet("static", values, SamplingKernel.none(), lattice=lattice,
                     meta=_base_meta(field))


def _mobile_line_values(coeffs_1d: np.ndarray, length: float,
                        kernel: SamplingKernel, spacing: float, count: int,
                        start: float) -> np.ndarray:
    """Filter, shift, fold and invert per-line coefficients (axis 0 = k)."""
    k = centered_wavenumbers(coeffs_1d.shape[0])
    omega = 2.0 * np.pi * k / length
    shaped = coeffs_1d * (kernel.response(omega)
                          * np.exp(1j * omega * start))[:, None]
    residues = k % count
    folded = np.zeros((count,) + shaped.shape[1:], dtype=complex)
    np.add.at(folded, residues, shaped)
    return np.fft.ifft(folded, axis=0).real * count


def sample_mobile(nu, lines: ParallelLineSet, period: float,
                  kernel: SamplingKernel = None, oversample: int = 1,
                  count: int = None, start_time: float = 0.0) -> SampleSet:
    """Constant-cadence readings from sensors riding a parallel line set.

    Sensor j moves along y = j * spacing at the set's speed and reads the
    field filtered by `kernel` along its track every period/oversample
    seconds, landing samples spaced speed*period/oversample apart along x.
    One full domain traversal per line is required: that spacing times the
    per-line count must equal the domain length along x.
    """
    field = _as_field(nu)
    if field.dimension != 2:
        raise ValueError("mobile line sampling expects a 2-d field")
    if kernel is None:
        kernel = SamplingKernel.none()
    if not period > 0.0:
        raise ValueError("sampling period must be strictly positive")
    if int(oversample) != oversample or oversample < 1:
        raise ValueError("oversampling factor must be an integer >= 1")
    oversample = int(oversample)
    length_x, length_y = field.lengths
    advance = lines.speed * period / oversample
    if count is None:
        count = int(round(length_x / advance))
    _require_commensurate(advance, count, length_x, "along-track")

    phases = np.exp(2j * np.pi * np.outer(
        centered_wavenumbers(field.coeffs.shape[1]),
        lines.line_offsets / length_y))
    per_line = field.coeffs @ phases
    values = _mobile_line_values(per_line, length_x, kernel, advance, count,
                                 lines.speed * start_time)

    lattice = SampleLattice.axis_aligned(
        (advance, lines.spacing), (count, lines.count),
        (lines.speed * start_time, lines.j_min * lines.spacing))
    times = start_time + (period / oversample) * np.arange(count)
    meta = _base_meta(field)
    meta.update(speed=lines.speed, period=period, line_spacing=lines.spacing,
                line_offsets=tuple(lines.line_offsets), start_time=start_time,
                oversample=oversample)
    return SampleSet("mobile", values, kernel, lattice=lattice, times=times,
                     meta=meta)


def sample_mobile_1d(nu, speed: float, period: float,
                     kernel: SamplingKernel = None, oversample: int = 1,
                     count: int = None, start_time: float = 0.0) -> SampleSet:
    """One sensor moving at constant speed over a 1-d field; see sample_mobile."""
    field = _as_field(nu)
    if field.dimension != 1:
        raise ValueError("expected a 1-d field")
    if kernel is None:
        kernel = SamplingKernel.none()
    if not speed > 0.0:
        raise ValueError("speed must be strictly positive")
    if not period > 0.0:
        raise ValueError("sampling period must be strictly positive")
    if int(oversample) != oversample or oversample < 1:
        raise ValueError("oversampling factor must be an integer >= 1")
    oversample = int(oversample)
    (length,) = field.lengths
    advance = speed * period / oversample
    if count is None:
        count = int(round(length / advance))
    _require_commensurate(advance, count, length, "along-track")

    values = _mobile_line_values(field.coeffs[:, None], length, kernel,
                                 advance, count, speed * start_time)[:, 0]
    lattice = SampleLattice.axis_aligned((advance,), (count,),
                                         (speed * start_time,))
    times = start_time + (period / oversample) * np.arange(count)
    meta = _base_meta(field)
    meta.update(speed=speed, period=period, start_time=start_time,
                oversample=oversample)
    return SampleSet("mobile", values, kernel, lattice=lattice, times=times,
                     meta=meta)


def sample_nonuniform(nu, path, cutoff: float, period: float,
                      count: int = None, window: tuple = None,
                      fine_factor: int = 16) -> SampleSet:
    """Uniform-in-time readings of the low-passed warped signal s(t) = f(x(t)).

    The warped signal is rendered on a fine uniform grid (`fine_factor` times
    the predicted band), low-passed by circular spectral truncation at
    `cutoff` (rad/s), and decimated to the requested cadence.  The window must
    span a whole number of domain traversals so that s is periodic over it;
    `count * period` must equal the window length.  A period above the
    Nyquist interval pi/cutoff sets the "temporal undersampling" flag on the
    output rather than raising.
    """
    field = _as_field(nu)
    if field.dimension != 1:
        raise ValueError("nonuniform sampling expects a 1-d field")
    if not cutoff > 0.0:
        raise ValueError("low-pass cutoff must be strictly positive")
    if window is None:
        window = getattr(path, "span", None)
        if window is None:
            raise ValueError("need an explicit time window for this path")
    t_lo, t_hi = float(window[0]), float(window[1])
    if not t_hi > t_lo:
        raise ValueError("empty time window")
    duration = t_hi - t_lo
    if count is None:
        count = int(round(duration / period))
    _require_commensurate(period, count, duration, "time window")

    (length,) = field.lengths
    travel = float(path.position(t_hi) - path.position(t_lo))
    traversals = travel / length
    if abs(traversals - round(traversals)) > _REL_TOL or round(traversals) < 1:
        raise LatticeError(
            "window must cover a whole number of domain traversals "
            "(got %.6g)" % traversals)
    traversals = int(round(traversals))

    band_f = 2.0 * np.pi * field.kmax[0] / length
    predicted = path.max_speed * band_f + getattr(path, "perturbation_bandwidth", 0.0)
    kept_half = int(np.floor(cutoff * duration / (2.0 * np.pi) * (1.0 + 1e-12)))
    fine = int(fine_factor) * max(count, 2 * kept_half + 1,
                                  int(np.ceil(predicted * duration / np.pi)) + 1)
    t_fine = t_lo + duration * np.arange(fine) / fine
    s_fine = field.eval(path.position(t_fine))
    spectrum = np.fft.fft(s_fine) / fine

    bins = np.arange(-kept_half, kept_half + 1)
    kept = spectrum[bins % fine]
    mask = np.zeros(fine, dtype=bool)
    mask[bins % fine] = True
    z_fine = np.fft.ifft(np.where(mask, spectrum, 0.0) * fine).real
    residual_ms = float(np.mean((s_fine - z_fine) ** 2))

    folded = np.zeros(count, dtype=complex)
    np.add.at(folded, bins % count, kept)
    values = np.fft.ifft(folded).real * count

    times = t_lo + period * np.arange(count)
    meta = _base_meta(field)
    meta.update(cutoff=cutoff, kept_halfcount=kept_half, window=(t_lo, t_hi),
                traversals=traversals, fine_count=fine,
                undersampled=bool(period > np.pi / cutoff * (1.0 + _REL_TOL)),
                residual_mean_square=residual_ms, path=path,
                path_max_speed=float(path.max_speed))
    return SampleSet("nonuniform", values, SamplingKernel.none(), times=times,
                     meta=meta)


@dataclass(frozen=True)
class MeasurementNoise:
    """I.i.d. zero-mean Gaussian readout noise: per-sample variance plus seed."""

    variance: float
    seed: int = 0

    def __post_init__(self):
        if self.variance < 0.0:
            raise ValueError("noise variance must be nonnegative")


def add_measurement_noise(samples: SampleSet, noise: MeasurementNoise) -> SampleSet:
    """Independent zero-mean Gaussian readout noise added to every value."""
    rng = np.random.default_rng(noise.seed)
    noisy = samples.values + np.sqrt(noise.variance) \
        * rng.standard_normal(samples.values.shape)
    meta = dict(samples.meta)
    meta.update(noise_variance=noise.variance, noise_seed=noise.seed)
    return SampleSet(samples.kind, noisy, samples.kernel,
                     lattice=samples.lattice, times=samples.times, meta=meta)


def export_samples_csv(samples: SampleSet, path) -> None:
    """Write one sample per row (index, coordinates, value), '#' meta first."""
    out = []
    band = samples.meta.get("band")
    meta_bits = ["scheme=%s" % samples.kind,
                 "kernel=%s" % samples.kernel.describe()]
    if samples.lattice is not None:
        meta_bits.append("generator=%s" % ";".join(
            ",".join("%.17g" % g for g in row) for row in samples.lattice.generator))
    if "lengths" in samples.meta:
        meta_bits.append("lengths=%s" % ",".join(
            "%.17g" % L for L in samples.meta["lengths"]))
    if band is not None:
        meta_bits.append("band=%s" % band.describe())
    if "oversample" in samples.meta:
        meta_bits.append("oversample=%d" % samples.meta["oversample"])
    if "noise_seed" in samples.meta:
        meta_bits.append("noise_seed=%s" % samples.meta["noise_seed"])
    out.append("# " + " ".join(meta_bits))

    fmt = "%.17g"
    if samples.kind == "nonuniform":
        out.append("n,t,value")
        for n, (t, v) in enumerate(zip(samples.times, samples.values)):
            out.append("%d," % n + fmt % t + "," + fmt % v)
    elif samples.lattice.dimension == 1:
        out.append("n,x,value")
        xs = samples.lattice.points()[..., 0]
        for n, (x, v) in enumerate(zip(xs, samples.values)):
            out.append("%d," % n + fmt % x + "," + fmt % v)
    else:
        pts = samples.lattice.points()
        out.append("n_x,n_y,x,y,value")
        for n in range(samples.lattice.counts[0]):
            for j in range(samples.lattice.counts[1]):
                out.append(",".join([
                    "%d" % n, "%d" % j,
                    fmt % pts[n, j, 0], fmt % pts[n, j, 1],
                    fmt % samples.values[n, j]]))
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")

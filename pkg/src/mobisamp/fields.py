"""Bandlimited random fields on a periodic domain.

A field is stored as a finite set of complex Fourier coefficients on the
integer wavenumber grid of an L-periodic domain,

    f(r) = sum_k c_k exp(i 2 pi <k, r / L>),   k integer (per axis),

so the physical angular frequency of index ``k`` on axis ``i`` is
``2 pi k / L_i`` (rad/m).  Real fields satisfy ``c_{-k} = conj(c_k)``;
constructors enforce this.  With this normalisation the mean square of the
field over the domain equals ``sum_k |c_k|^2``.

Noise realisations draw each coefficient as an independent complex Gaussian
with variance ``PSD(2 pi k / L) / prod(L)``, i.e. the spectral density times
the frequency-cell volume ``(2 pi / L)^d`` divided by ``(2 pi)^d``, which is
the discrete counterpart of ``E[w^2] = (2 pi)^{-d} integral PSD``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyBandError, GridParseError, RangeError

_REL_TOL = 1e-12

__all__ = [
    "BandRegion",
    "HarmonicField",
    "NoisePsd",
    "NoiseRealization",
    "ObservedField",
    "synthesize_field",
    "synthesize_noise",
    "eval_field",
    "fold_coefficients",
    "grid_values",
    "pad_coefficients",
    "export_grid_csv",
    "ingest_grid_csv",
    "export_spectrum_csv",
]


def centered_wavenumbers(n: int) -> np.ndarray:
    """Integer wavenumbers -K..K for a centered coefficient array of odd size n."""
    if n % 2 == 0:
        raise ValueError("centered coefficient arrays must have odd size, got %d" % n)
    half = (n - 1) // 2
    return np.arange(-half, half + 1)


@dataclass(frozen=True)
class BandRegion:
    """Closed region of frequency space a field is confined to.

    Membership includes the boundary.  Three shapes are supported:

    - ``rectangle``: ``|omega_i| <= halfwidth_i`` on every axis,
    - ``strip``: bounded on one axis only (``halfwidth`` is None elsewhere),
    - ``wave-cone``: ``|omega_x| <= |omega_t| / c`` truncated at
      ``|omega_t| <= rho_t``, a bow-tie in the (space, time) plane.
    """

    kind: str
    dimension: int
    halfwidths: tuple
    wave_speed: float | None = None

    def __post_init__(self):
        if self.kind not in ("rectangle", "strip", "wave-cone"):
            raise ValueError("unknown band kind %r" % self.kind)
        if len(self.halfwidths) != self.dimension:
            raise ValueError("halfwidths must match dimension")
        for h in self.halfwidths:
            if h is not None and not h > 0.0:
                raise ValueError("band halfwidths must be strictly positive")
        if self.kind == "wave-cone" and not (self.wave_speed or 0) > 0.0:
            raise ValueError("wave-cone band needs a positive wave speed")

    @classmethod
    def rectangle(cls, *halfwidths: float) -> "BandRegion":
        return cls("rectangle", len(halfwidths), tuple(float(h) for h in halfwidths))

    @classmethod
    def strip(cls, halfwidth: float, bounded_axis: int = 1, dimension: int = 2) -> "BandRegion":
        hw = [None] * dimension
        hw[bounded_axis] = float(halfwidth)
        return cls("strip", dimension, tuple(hw))

    @classmethod
    def wave_cone(cls, rho_t: float, wave_speed: float) -> "BandRegion":
        # axis 0 is space, axis 1 is time; spatial extent is rho_t / c
        return cls("wave-cone", 2, (float(rho_t) / float(wave_speed), float(rho_t)),
                   wave_speed=float(wave_speed))

    def contains(self, omega) -> np.ndarray:
        """Vectorised closed membership test; omega has shape (..., dimension)."""
        w = np.asarray(omega, dtype=float)
        if self.dimension == 1:
            w = w.reshape(w.shape + (1,)) if w.ndim == 0 or w.shape[-1:] != (1,) else w
        if w.shape[-1] != self.dimension:
            raise ValueError("omega last axis must have length %d" % self.dimension)
        if self.kind == "wave-cone":
            wx, wt = w[..., 0], w[..., 1]
            rho_t = self.halfwidths[1]
            slack = _REL_TOL * rho_t
            return (np.abs(wt) <= rho_t + slack) & (
                self.wave_speed * np.abs(wx) <= np.abs(wt) + slack)
        ok = np.ones(w.shape[:-1], dtype=bool)
        for axis, h in enumerate(self.halfwidths):
            if h is None:
                continue
            ok &= np.abs(w[..., axis]) <= h * (1.0 + _REL_TOL)
        return ok

    def index_bound(self, axis: int, length: float) -> int | None:
        """Largest |k| on `axis` that can fall inside the band, None if unbounded."""
        h = self.halfwidths[axis]
        if h is None:
            return None
        return int(np.floor(h * length / (2.0 * np.pi) * (1.0 + _REL_TOL)))

    def describe(self) -> str:
        if self.kind == "wave-cone":
            return "wave-cone:rho_t=%.17g,c=%.17g" % (self.halfwidths[1], self.wave_speed)
        parts = ",".join("inf" if h is None else "%.17g" % h for h in self.halfwidths)
        return "%s:%s" % (self.kind, parts)


def _omega_mesh(lengths, shape) -> np.ndarray:
    axes = [2.0 * np.pi * centered_wavenumbers(n) / L for n, L in zip(shape, lengths)]
    if len(shape) == 1:
        return axes[0][:, None]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1)


@dataclass(frozen=True)
class HarmonicField:
    """Real bandlimited field as a centered complex coefficient array.

    ``coeffs[idx]`` is the coefficient of wavenumber ``k = idx - kmax`` per
    axis; arrays therefore have odd size on every axis.  Instances are
    immutable; the coefficient buffer is marked read-only.
    """

    lengths: tuple
    coeffs: np.ndarray
    band: BandRegion

    def __post_init__(self):
        lengths = tuple(float(L) for L in (
            self.lengths if np.iterable(self.lengths) else (self.lengths,)))
        object.__setattr__(self, "lengths", lengths)
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != len(lengths):
            raise ValueError("coefficient rank %d does not match %d domain lengths"
                             % (c.ndim, len(lengths)))
        if c.ndim != self.band.dimension:
            raise ValueError("band dimension does not match coefficients")
        for n in c.shape:
            centered_wavenumbers(n)  # enforces odd sizes
        for L in lengths:
            if not L > 0.0:
                raise ValueError("domain lengths must be positive")
        scale = max(float(np.max(np.abs(c))) if c.size else 0.0, 1e-300)
        flipped = np.conj(c[tuple(slice(None, None, -1) for _ in range(c.ndim))])
        if float(np.max(np.abs(c - flipped))) > 1e-9 * scale:
            raise ValueError("coefficients are not conjugate symmetric")
        outside = ~self.band.contains(_omega_mesh(lengths, c.shape))
        if c.ndim == 1:
            outside = outside.reshape(c.shape)
        if c[outside].size and float(np.max(np.abs(c[outside]))) > 1e-9 * scale:
            raise ValueError("coefficients leak outside the declared band")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def dimension(self) -> int:
        return len(self.lengths)

    @property
    def kmax(self) -> tuple:
        return tuple((n - 1) // 2 for n in self.coeffs.shape)

    def frequencies(self, axis: int) -> np.ndarray:
        """Angular frequencies 2 pi k / L of the coefficient grid on `axis`."""
        return 2.0 * np.pi * centered_wavenumbers(self.coeffs.shape[axis]) / self.lengths[axis]

    def mean_square(self) -> float:
        """Mean square of the field over the domain (Parseval)."""
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def eval(self, points) -> np.ndarray:
        """Evaluate the field at arbitrary points by direct series summation.

        For 1-D fields `points` may have any shape; for 2-D fields the last
        axis must hold (x, y).
        """
        pts = np.asarray(points, dtype=float)
        if self.dimension == 1:
            flat = pts.reshape(-1)
            phases = np.exp(1j * np.outer(flat, self.frequencies(0)))
            vals = (phases @ self.coeffs).real
            return vals.reshape(pts.shape) if pts.shape else vals[0]
        if pts.shape[-1:] != (2,):
            raise ValueError("2-D field evaluation needs points with last axis (x, y)")
        flat = pts.reshape(-1, 2)
        ex = np.exp(1j * np.outer(flat[:, 0], self.frequencies(0)))
        ey = np.exp(1j * np.outer(flat[:, 1], self.frequencies(1)))
        vals = np.einsum("pa,ab,pb->p", ex, self.coeffs, ey).real
        out_shape = pts.shape[:-1]
        return vals.reshape(out_shape) if out_shape else vals[0]

    def grid(self, counts) -> np.ndarray:
        """Exact field values on the uniform grid with `counts` points per axis."""
        counts = tuple(int(n) for n in (counts if np.iterable(counts) else (counts,)))
        return grid_values(self.coeffs, counts)

    def lowpass(self, cutoffs) -> "HarmonicField":
        """Project onto the closed rectangle |omega_i| <= cutoff_i."""
        cut = tuple(float(c) for c in (cutoffs if np.iterable(cutoffs) else
                                       (cutoffs,) * self.dimension))
        rect = BandRegion.rectangle(*cut)
        keep = rect.contains(_omega_mesh(self.lengths, self.coeffs.shape))
        if self.dimension == 1:
            keep = keep.reshape(self.coeffs.shape)
        bounds = [rect.index_bound(ax, self.lengths[ax]) for ax in range(self.dimension)]
        slices = tuple(slice(max(0, k - b), k + b + 1)
                       for k, b in zip(self.kmax, bounds))
        trimmed = np.where(keep, self.coeffs, 0.0)[slices]
        return HarmonicField(self.lengths, trimmed, rect)

    def transpose(self) -> "HarmonicField":
        if self.dimension != 2:
            raise ValueError("transpose is defined for 2-D fields only")
        if self.band.kind == "rectangle":
            band = BandRegion.rectangle(self.band.halfwidths[1], self.band.halfwidths[0])
        elif self.band.kind == "strip":
            axis = 0 if self.band.halfwidths[0] is not None else 1
            band = BandRegion.strip(self.band.halfwidths[axis], bounded_axis=1 - axis)
        else:
            raise ValueError("transpose is not defined for %s bands" % self.band.kind)
        return HarmonicField((self.lengths[1], self.lengths[0]),
                             self.coeffs.T.copy(), band)


def pad_coefficients(coeffs: np.ndarray, kmax) -> np.ndarray:
    """Embed a centered coefficient array in a larger centered grid."""
    kmax = tuple(int(k) for k in (kmax if np.iterable(kmax) else (kmax,) * coeffs.ndim))
    out = np.zeros(tuple(2 * k + 1 for k in kmax), dtype=complex)
    slices = []
    for axis, k in enumerate(kmax):
        half = (coeffs.shape[axis] - 1) // 2
        if half > k:
            raise ValueError("cannot pad to a smaller grid")
        slices.append(slice(k - half, k + half + 1))
    out[tuple(slices)] = coeffs
    return out


def fold_coefficients(coeffs: np.ndarray, counts) -> np.ndarray:
    """Fold centered coefficients onto residue bins modulo `counts` per axis.

    Bin ``m`` accumulates every coefficient with ``k = m (mod N)``, which is
    exactly the spectrum aliasing caused by sampling the field on the uniform
    lattice with ``N`` points per axis.
    """
    counts = tuple(int(n) for n in (counts if np.iterable(counts) else (counts,)))
    if len(counts) != coeffs.ndim:
        raise ValueError("counts must match coefficient rank")
    out = np.zeros(counts, dtype=complex)
    residues = [centered_wavenumbers(n) % m for n, m in zip(coeffs.shape, counts)]
    if coeffs.ndim == 1:
        np.add.at(out, residues[0], coeffs)
    else:
        rx, ry = np.meshgrid(residues[0], residues[1], indexing="ij")
        np.add.at(out, (rx, ry), coeffs)
    return out


def grid_values(coeffs: np.ndarray, counts) -> np.ndarray:
    """Field values on the uniform grid, via folding and an inverse FFT."""
    folded = fold_coefficients(coeffs, counts)
    vals = np.fft.ifftn(folded) * np.prod(folded.shape)
    return np.ascontiguousarray(vals.real)


@dataclass(frozen=True)
class NoisePsd:
    """Power spectral density of stationary noise.

    ``flat-band`` takes the constant ``level`` on the hypercube
    ``[-ratio*cutoff, ratio*cutoff]^d`` and zero outside.  ``tabulated`` is
    isotropic: linear interpolation of ``values`` over ``radii`` in
    ``|omega|``, extended beyond the last sample by the declared power-law
    decay ``|omega|^{-decay}``.
    """

    kind: str
    dimension: int
    level: float = 0.0
    band_ratio: float | None = None
    cutoff: float | None = None
    radii: np.ndarray | None = None
    values: np.ndarray | None = None
    decay: float | None = None

    @classmethod
    def flat_band(cls, band_ratio: float, cutoff: float, level: float = 1.0,
                  dimension: int = 2) -> "NoisePsd":
        if not band_ratio > 0.0:
            raise ValueError("flat-band ratio must be strictly positive")
        if not cutoff > 0.0:
            raise ValueError("flat-band cutoff must be strictly positive")
        if level < 0.0:
            raise ValueError("flat-band level must be nonnegative")
        return cls("flat-band", dimension, level=float(level),
                   band_ratio=float(band_ratio), cutoff=float(cutoff))

    @classmethod
    def tabulated(cls, radii, values, decay: float, dimension: int = 2) -> "NoisePsd":
        radii = np.asarray(radii, dtype=float)
        values = np.asarray(values, dtype=float)
        if radii.ndim != 1 or radii.size < 2 or values.shape != radii.shape:
            raise ValueError("tabulated PSD needs matching 1-D radii and values")
        if np.any(np.diff(radii) <= 0) or radii[0] < 0:
            raise ValueError("tabulated radii must be increasing and nonnegative")
        if np.any(values < 0):
            raise ValueError("tabulated PSD values must be nonnegative")
        if not decay > 0.0:
            raise ValueError("tabulated decay exponent must be positive")
        radii = radii.copy(); radii.flags.writeable = False
        values = values.copy(); values.flags.writeable = False
        return cls("tabulated", dimension, radii=radii, values=values, decay=float(decay))

    @property
    def support_halfwidth(self) -> float | None:
        """Per-axis support bound, None when the support is unbounded."""
        if self.kind == "flat-band":
            return self.band_ratio * self.cutoff
        return None

    def is_summable(self) -> bool:
        """Whether aliased replica sums of this PSD converge."""
        if self.kind == "flat-band":
            return True
        return self.decay > self.dimension

    def value(self, omega) -> np.ndarray:
        """Vectorised PSD evaluation; omega has shape (..., dimension)."""
        w = np.asarray(omega, dtype=float)
        if self.dimension == 1 and (w.ndim == 0 or w.shape[-1:] != (1,)):
            w = w.reshape(w.shape + (1,))
        if self.kind == "flat-band":
            half = self.support_halfwidth
            inside = np.all(np.abs(w) <= half * (1.0 + _REL_TOL), axis=-1)
            return np.where(inside, self.level, 0.0)
        r = np.sqrt(np.sum(w ** 2, axis=-1))
        out = np.interp(r, self.radii, self.values)
        tail = r > self.radii[-1]
        if np.any(tail):
            out = np.where(tail, self.values[-1] *
                           (np.maximum(r, self.radii[-1]) / self.radii[-1]) ** (-self.decay),
                           out)
        return out


@dataclass(frozen=True)
class NoiseRealization:
    """One seeded draw of a noise field, kept with its generating PSD."""

    field: HarmonicField
    psd: NoisePsd
    seed: int

    def eval(self, points) -> np.ndarray:
        return self.field.eval(points)


@dataclass(frozen=True)
class ObservedField:
    """Signal field plus (optionally) an additive stationary noise draw."""

    signal: HarmonicField
    noise: NoiseRealization | None = None

    def __post_init__(self):
        if self.noise is not None and self.noise.field.lengths != self.signal.lengths:
            raise ValueError("signal and noise live on different domains")

    @property
    def lengths(self) -> tuple:
        return self.signal.lengths

    def components(self) -> list:
        parts = [self.signal]
        if self.noise is not None:
            parts.append(self.noise.field)
        return parts

    def combined_coefficients(self) -> np.ndarray:
        """Coefficients of signal + noise on the smallest common centered grid."""
        parts = self.components()
        kmax = tuple(max(p.kmax[ax] for p in parts) for ax in range(self.signal.dimension))
        total = np.zeros(tuple(2 * k + 1 for k in kmax), dtype=complex)
        for p in parts:
            total += pad_coefficients(p.coeffs, kmax)
        return total

    def as_field(self) -> HarmonicField:
        """Signal + noise as one harmonic field on a bounding rectangle band."""
        coeffs = self.combined_coefficients()
        kmax = tuple((n - 1) // 2 for n in coeffs.shape)
        band = BandRegion.rectangle(*((k + 0.5) * 2.0 * np.pi / L
                                      for k, L in zip(kmax, self.lengths)))
        return HarmonicField(self.lengths, coeffs, band)

    def eval(self, points) -> np.ndarray:
        out = self.signal.eval(points)
        if self.noise is not None:
            out = out + self.noise.eval(points)
        return out


def eval_field(nu, points) -> np.ndarray:
    """Evaluate a HarmonicField, NoiseRealization or ObservedField at points."""
    if isinstance(nu, (HarmonicField, ObservedField, NoiseRealization)):
        return nu.eval(points)
    raise TypeError("cannot evaluate %r" % type(nu).__name__)


def _as_lengths(length, dimension: int) -> tuple:
    if np.iterable(length):
        lengths = tuple(float(L) for L in length)
        if len(lengths) != dimension:
            raise ValueError("expected %d domain lengths" % dimension)
    else:
        lengths = (float(length),) * dimension
    return lengths


def _draw_symmetric(rng: np.random.Generator, variances: np.ndarray) -> np.ndarray:
    """Independent complex Gaussians with E|c_k|^2 = variances, conjugate symmetric.

    Drawing re/im at the target variance and averaging with the mirrored
    conjugate leaves every pair at exactly the target variance, including the
    self-conjugate DC coefficient which comes out real.
    """
    sigma = np.sqrt(variances)
    raw = sigma * (rng.standard_normal(variances.shape)
                   + 1j * rng.standard_normal(variances.shape))
    flipped = np.conj(raw[tuple(slice(None, None, -1) for _ in range(raw.ndim))])
    return 0.5 * (raw + flipped)


def synthesize_field(seed: int, length, band: BandRegion, power: float,
                     kmax=None) -> HarmonicField:
    """Draw a random real field confined to `band` with expected power `power`.

    Power is spread uniformly over the in-band harmonics.  ``kmax`` caps the
    coefficient grid per axis; it is required only for band axes the region
    leaves unbounded (strip), where it defaults to 64.
    """
    if power < 0.0:
        raise ValueError("field power must be nonnegative")
    lengths = _as_lengths(length, band.dimension)
    if kmax is None:
        kcap = (None,) * band.dimension
    else:
        kcap = tuple(int(k) for k in (kmax if np.iterable(kmax) else
                                      (kmax,) * band.dimension))
    kk = []
    for axis, L in enumerate(lengths):
        bound = band.index_bound(axis, L)
        cap = kcap[axis]
        if bound is None:
            bound = cap if cap is not None else 64
        elif cap is not None:
            bound = min(bound, cap)
        kk.append(bound)
    shape = tuple(2 * k + 1 for k in kk)
    inside = band.contains(_omega_mesh(lengths, shape))
    if len(shape) == 1:
        inside = inside.reshape(shape)
    count = int(np.count_nonzero(inside))
    if count == 0:
        raise EmptyBandError("no representable harmonic falls inside the band")
    variances = np.where(inside, power / count, 0.0)
    coeffs = _draw_symmetric(np.random.default_rng(seed), variances)
    coeffs[~inside] = 0.0
    return HarmonicField(lengths, coeffs, band)


def synthesize_noise(seed: int, length, psd: NoisePsd, kmax=None) -> NoiseRealization:
    """Draw a stationary noise field whose coefficients follow `psd`.

    Each coefficient is an independent complex Gaussian with variance
    ``psd(2 pi k / L) / prod(L)``; the draw is conjugate-symmetrised so the
    realisation is real.  For unbounded PSDs the grid is truncated at `kmax`
    per axis (default 64).
    """
    lengths = _as_lengths(length, psd.dimension)
    half = psd.support_halfwidth
    if kmax is None:
        kcap = (None,) * psd.dimension
    else:
        kcap = tuple(int(k) for k in (kmax if np.iterable(kmax) else
                                      (kmax,) * psd.dimension))
    kk = []
    for axis, L in enumerate(lengths):
        bound = None if half is None else int(np.floor(half * L / (2 * np.pi)
                                                       * (1 + _REL_TOL)))
        cap = kcap[axis]
        if bound is None:
            bound = cap if cap is not None else 64
        elif cap is not None:
            bound = min(bound, cap)
        kk.append(bound)
    shape = tuple(2 * k + 1 for k in kk)
    variances = psd.value(_omega_mesh(lengths, shape)) / float(np.prod(lengths))
    if len(shape) == 1:
        variances = variances.reshape(shape)
    coeffs = _draw_symmetric(np.random.default_rng(seed), variances)
    if half is not None:
        band = BandRegion.rectangle(*(half,) * psd.dimension)
    else:
        band = BandRegion.rectangle(*((k + 0.5) * 2 * np.pi / L
                                      for k, L in zip(kk, lengths)))
    return NoiseRealization(HarmonicField(lengths, coeffs, band), psd, int(seed))


# ---------------------------------------------------------------------------
# grid CSV import/export

def export_grid_csv(f: HarmonicField, path, counts, seed=None) -> None:
    """Write field values on a uniform grid as CSV with a '#' metadata line.

    2-D grids are laid out with rows running along y (ascending) and columns
    along x, so cell (j, i) holds the value at (x_i, y_j).
    """
    counts = tuple(int(n) for n in (counts if np.iterable(counts) else (counts,)))
    vals = f.grid(counts)
    meta = "length=%s band=%s counts=%s" % (
        ",".join("%.17g" % L for L in f.lengths), f.band.describe(),
        ",".join(str(n) for n in counts))
    if seed is not None:
        meta += " seed=%d" % seed
    rows = vals.T if vals.ndim == 2 else vals[None, :]
    with open(path, "w", newline="") as fh:
        fh.write("# %s\n" % meta)
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow(["%.17g" % v for v in row])


def _fft_axis_to_centered(n: int) -> np.ndarray:
    """Matrix mapping FFT bins 0..n-1 to centered wavenumbers, splitting a
    shared Nyquist bin of an even-sized grid across +-n/2."""
    if n % 2 == 1:
        half = (n - 1) // 2
        out = np.zeros((n, n))
        for k in range(-half, half + 1):
            out[k + half, k % n] = 1.0
        return out
    half = n // 2
    out = np.zeros((n + 1, n))
    for k in range(-half + 1, half):
        out[k + half, k % n] = 1.0
    out[0, half] = 0.5
    out[n, half] = 0.5
    return out


def ingest_grid_csv(path, length, target_band: BandRegion) -> HarmonicField:
    """Read a uniform grid CSV, transform to coefficients and project onto
    `target_band`.

    2-D grids use the export_grid_csv layout (rows along y, columns along x).
    Lines starting with '#' are ignored.  Parse failures raise GridParseError
    naming the offending row and column (1-based, counting data rows only).
    """
    rows = []
    width = None
    with open(path, newline="") as fh:
        for raw in csv.reader(fh):
            if not raw or (raw[0].lstrip().startswith("#")):
                continue
            cells = []
            for j, cell in enumerate(raw):
                try:
                    cells.append(float(cell))
                except ValueError:
                    raise GridParseError(
                        "row %d, column %d: could not parse %r as a number"
                        % (len(rows) + 1, j + 1, cell.strip())) from None
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise GridParseError("row %d: expected %d columns, found %d"
                                     % (len(rows) + 1, width, len(cells)))
            rows.append(cells)
    if not rows:
        raise GridParseError("no data rows in grid file")
    vals = np.asarray(rows, dtype=float)
    if target_band.dimension == 1:
        if vals.shape[0] == 1:
            vals = vals[0]
        elif vals.shape[1] == 1:
            vals = vals[:, 0]
        else:
            raise GridParseError("expected a single row or column for a 1-D grid")
    else:
        vals = vals.T  # file rows run along y; internal axis 0 is x
    lengths = _as_lengths(length, target_band.dimension)
    spectrum = np.fft.fftn(vals) / vals.size
    mats = [_fft_axis_to_centered(n) for n in vals.shape]
    if vals.ndim == 1:
        coeffs = mats[0] @ spectrum
    else:
        coeffs = mats[0] @ spectrum @ mats[1].T
    inside = target_band.contains(_omega_mesh(lengths, coeffs.shape))
    if coeffs.ndim == 1:
        inside = inside.reshape(coeffs.shape)
    coeffs = np.where(inside, coeffs, 0.0)
    return HarmonicField(lengths, coeffs, target_band)


def export_spectrum_csv(f: HarmonicField, path) -> None:
    """Write the coefficient grid as CSV rows k_x, k_y, re, im (k, re, im in 1-D)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if f.dimension == 1:
            writer.writerow(["k", "re", "im"])
            for k, c in zip(centered_wavenumbers(f.coeffs.shape[0]), f.coeffs):
                writer.writerow(["%d" % k, "%.17g" % c.real, "%.17g" % c.imag])
            return
        writer.writerow(["k_x", "k_y", "re", "im"])
        kx = centered_wavenumbers(f.coeffs.shape[0])
        ky = centered_wavenumbers(f.coeffs.shape[1])
        for i, kxi in enumerate(kx):
            for j, kyj in enumerate(ky):
                c = f.coeffs[i, j]
                writer.writerow(["%d" % kxi, "%d" % kyj,
                                 "%.17g" % c.real, "%.17g" % c.imag])

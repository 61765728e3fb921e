"""Reconstruction back end: lattice estimators, warped interpolation, merging.

Lattice reconstruction recovers passband coefficients from rectangular-lattice
samples by a DFT: the bin at residue k mod N holds the sum of the true
coefficient and its lattice replicas k + m N, so the estimator is exact when
the sampled spectrum fits in one fold and honestly aliased otherwise.  The
implied interpolation filter is the brick-wall kernel over the passband with
amplitude equal to the lattice cell volume, which together with the DFT
normalization gives unit end-to-end gain; callers never need to manage gains.

Warped-time reconstruction interpolates the uniform time series with its
trigonometric polynomial and reads it back at the warped time of each queried
position.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .errors import LatticeError
from .fields import BandRegion, HarmonicField, centered_wavenumbers
from .sampling import SampleSet, SamplingKernel
from .trajectories import inverse_time

_REL_TOL = 1e-9

__all__ = [
    "ReconKernel",
    "ReconstructedField",
    "WarpReconstruction",
    "reconstruct_lattice",
    "reconstruct_1d",
    "warp_reconstruct",
    "predicted_box_spectrum",
    "combine_orthogonal",
]


@dataclass(frozen=True)
class ReconKernel:
    """Brick-wall interpolation kernel: `gain` inside the per-axis cutoff box.

    With gain equal to the lattice cell volume the sample-to-field pipeline
    has unit end-to-end gain.  `periodized` records that the kernel is the
    torus (Dirichlet) version of the sinc interpolator; the plane-wave sinc
    is recovered in the large-domain limit.
    """

    cutoffs: tuple
    gain: float
    periodized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "cutoffs",
                           tuple(float(c) for c in np.atleast_1d(self.cutoffs)))

    def response(self, omega):
        omega = np.asarray(omega, dtype=float)
        if omega.shape[-1] != len(self.cutoffs):
            raise ValueError("frequency dimension mismatch")
        inside = np.ones(omega.shape[:-1], dtype=bool)
        for ax, c in enumerate(self.cutoffs):
            inside &= np.abs(omega[..., ax]) <= c * (1.0 + 1e-12)
        return self.gain * inside.astype(float)


def _passband_wavenumbers(band: BandRegion, lengths) -> list:
    ks = []
    for ax, L in enumerate(lengths):
        bound = band.index_bound(ax, L)
        if bound is None:
            raise LatticeError("reconstruction band must be bounded on every axis")
        ks.append(np.arange(-bound, bound + 1))
    return ks


@dataclass(frozen=True)
class ReconstructedField:
    """A passband estimate plus the sampling provenance needed to audit it.

    `counts` are the lattice counts used for the fold, `extents` the largest
    absolute wavenumber per axis that could have reached the samples (after
    any band-limiting sensor kernel), so replica bookkeeping can be done
    without re-running the pipeline.
    """

    field: HarmonicField
    scheme: str
    counts: tuple
    extents: tuple
    kernel: SamplingKernel
    meta: MappingProxyType = None

    def __post_init__(self):
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta or {})))

    @property
    def coeffs(self) -> np.ndarray:
        return self.field.coeffs

    @property
    def lengths(self) -> tuple:
        return self.field.lengths

    @property
    def band(self) -> BandRegion:
        return self.field.band

    def eval(self, points):
        return self.field.eval(points)

    def mean_square(self) -> float:
        return self.field.mean_square()

    def transpose(self) -> "ReconstructedField":
        """Swap the two axes of a 2-d estimate (e.g. to undo a y-scan setup)."""
        meta = dict(self.meta)
        meta["transposed"] = not meta.get("transposed", False)
        return ReconstructedField(self.field.transpose(), self.scheme,
                                  self.counts[::-1], self.extents[::-1],
                                  self.kernel, meta=meta)

    def replica_masks(self) -> dict:
        """Boolean masks over the passband grid classifying replica overlap.

        Keys: "any" (some replica besides the true coefficient lands in the
        bin), "axis<i>" (a replica shifted only along axis i does), "mixed"
        (a replica shifted along several axes does).  A bin flagged nowhere is
        alias-free for the recorded source extents.
        """
        dim = self.field.dimension
        kgrids = [centered_wavenumbers(n) for n in self.coeffs.shape]
        mranges = []
        for ax in range(dim):
            top = (self.extents[ax] + int(np.max(np.abs(kgrids[ax])))) \
                // self.counts[ax]
            mranges.append(range(-top, top + 1))
        masks = {"any": np.zeros(self.coeffs.shape, dtype=bool)}
        for ax in range(dim):
            masks["axis%d" % ax] = np.zeros(self.coeffs.shape, dtype=bool)
        if dim > 1:
            masks["mixed"] = np.zeros(self.coeffs.shape, dtype=bool)
        mesh = np.meshgrid(*kgrids, indexing="ij")
        for m in np.ndindex(*[len(r) for r in mranges]):
            shift = tuple(mranges[ax][m[ax]] for ax in range(dim))
            if all(s == 0 for s in shift):
                continue
            hit = np.ones(self.coeffs.shape, dtype=bool)
            for ax in range(dim):
                hit &= np.abs(mesh[ax] + shift[ax] * self.counts[ax]) \
                    <= self.extents[ax]
            if not hit.any():
                continue
            masks["any"] |= hit
            nonzero = [ax for ax in range(dim) if shift[ax] != 0]
            if len(nonzero) == 1:
                masks["axis%d" % nonzero[0]] |= hit
            else:
                masks["mixed"] |= hit
        return masks


def _effective_extents(samples: SampleSet) -> tuple:
    """Largest |k| per axis that survives the sensor kernel."""
    extents = list(samples.meta["source_kmax"])
    if samples.kind == "mobile" and samples.kernel.kind == "ideal":
        length = samples.meta["lengths"][0]
        cap = int(np.floor(samples.kernel.cutoff * length / (2.0 * np.pi)
                           * (1.0 + 1e-12)))
        extents[0] = min(extents[0], cap)
    return tuple(extents)


def reconstruct_lattice(samples: SampleSet, kernel: ReconKernel = None,
                        band: BandRegion = None) -> ReconstructedField:
    """Estimate passband coefficients from rectangular-lattice samples.

    The passband comes from `kernel` cutoffs when given (its gain relative to
    the lattice cell volume scales the output), from `band` otherwise, and
    defaults to the band of the sampled field.  Bins whose residue class
    contains out-of-band replicas receive the folded sum; no attempt is made
    to hide aliasing.
    """
    if samples.kind == "nonuniform":
        raise ValueError("use warp_reconstruct for nonuniform acquisitions")
    if samples.lattice is None or not samples.lattice.is_axis_aligned:
        raise LatticeError("lattice reconstruction expects an axis-aligned lattice")
    lengths = samples.meta["lengths"]
    counts = samples.lattice.counts
    for ax, (h, n, L) in enumerate(zip(samples.lattice.spacings, counts, lengths)):
        if abs(h * n - L) > _REL_TOL * abs(L):
            raise LatticeError("axis %d lattice does not tile the domain" % ax)
    scale = 1.0
    if kernel is not None:
        if band is not None:
            raise ValueError("pass either a reconstruction kernel or a band")
        if len(kernel.cutoffs) != len(counts):
            raise LatticeError("kernel cutoffs do not match the lattice dimension")
        band = BandRegion.rectangle(*kernel.cutoffs)
        scale = kernel.gain / samples.lattice.cell_volume
    if band is None:
        band = samples.meta["band"]

    ks = _passband_wavenumbers(band, lengths)
    spectrum = np.fft.fftn(samples.values) / samples.values.size
    idx = np.ix_(*[k % n for k, n in zip(ks, counts)])
    coeffs = spectrum[idx] * scale
    for ax, (k, L, delta) in enumerate(zip(ks, lengths, samples.lattice.offset)):
        if delta != 0.0:
            phase = np.exp(-2j * np.pi * k * delta / L)
            shape = [1] * len(counts)
            shape[ax] = k.size
            coeffs = coeffs * phase.reshape(shape)

    field = HarmonicField(lengths, coeffs, band)
    scheme = "mobile-lines" if samples.kind == "mobile" else "static-lattice"
    meta = {"offset": tuple(samples.lattice.offset),
            "sample_count": samples.count,
            "kernel": samples.kernel.describe(),
            "recon_kernel": kernel if kernel is not None else ReconKernel(
                tuple(2.0 * np.pi * k[-1] / L if k[-1] else 0.0
                      for k, L in zip(ks, lengths)),
                samples.lattice.cell_volume)}
    return ReconstructedField(field, scheme, counts, _effective_extents(samples),
                              samples.kernel, meta=meta)


def reconstruct_1d(samples: SampleSet, speed: float = None, period: float = None,
                   cutoff: float = None) -> ReconstructedField:
    """One-dimensional lattice reconstruction with optional cross-checks.

    `speed` and `period`, when given, are validated against the recorded
    acquisition (spacing speed*period/oversample); `cutoff` sets the passband
    and defaults to the sampled field's band.
    """
    if samples.lattice is None or samples.lattice.dimension != 1:
        raise LatticeError("expected samples on a 1-d lattice")
    if speed is not None or period is not None:
        if speed is None or period is None:
            raise ValueError("pass speed and period together")
        factor = samples.meta.get("oversample", 1)
        expected = speed * period / factor
        spacing = samples.lattice.spacings[0]
        if abs(spacing - expected) > _REL_TOL * abs(expected):
            raise LatticeError(
                "recorded sample spacing %.17g does not match speed*period/"
                "oversample = %.17g" % (spacing, expected))
    band = None if cutoff is None else BandRegion.rectangle(float(cutoff))
    return reconstruct_lattice(samples, band=band)


@dataclass(frozen=True)
class WarpReconstruction:
    """Field estimate f_hat(x) = z(T(x)) from warped-time samples.

    z is the trigonometric polynomial through the uniform time samples (the
    Nyquist bin of an even count is split evenly between +/- to keep z real)
    and T is the inverse of the sensor position map.  Positions are queryable
    wherever the path is invertible.
    """

    samples: SampleSet
    path: object

    def __post_init__(self):
        values = self.samples.values
        count = values.size
        raw = np.fft.fft(values) / count
        if count % 2 == 0:
            bins = np.arange(-(count // 2), count // 2 + 1)
            coeffs = raw[bins % count].astype(complex)
            coeffs[0] *= 0.5
            coeffs[-1] *= 0.5
        else:
            bins = np.arange(-(count // 2), count // 2 + 1)
            coeffs = raw[bins % count].astype(complex)
        coeffs.flags.writeable = False
        bins.flags.writeable = False
        object.__setattr__(self, "_bins", bins)
        object.__setattr__(self, "_coeffs", coeffs)

    @property
    def window(self) -> tuple:
        return self.samples.meta["window"]

    def eval_time(self, t):
        """Interpolated series z at time(s) t."""
        t = np.asarray(t, dtype=float)
        t_lo, t_hi = self.window
        phase = np.exp(2j * np.pi * np.multiply.outer(
            t - t_lo, self._bins) / (t_hi - t_lo))
        out = (phase @ self._coeffs).real
        return out if t.shape else float(out)

    def eval(self, points):
        """Field estimate at position(s): interpolate at the warped time."""
        return self.eval_time(inverse_time(self.path, points))


def warp_reconstruct(samples: SampleSet, path=None) -> WarpReconstruction:
    """Build the warped-time estimator for a nonuniform acquisition."""
    if samples.kind != "nonuniform":
        raise ValueError("warp reconstruction expects nonuniform samples")
    if path is None:
        path = samples.meta.get("path")
        if path is None:
            raise ValueError("no path recorded with the samples; pass one")
    return WarpReconstruction(samples, path)


def predicted_box_spectrum(field: HarmonicField, half_width: float,
                           cutoff: float) -> HarmonicField:
    """Distortion a box sensor kernel imprints on an in-band spectrum.

    Each harmonic is multiplied by the normalized box response at its
    along-track frequency; no fold is applied, so this is the dense-sampling
    (vanishing lattice spacing) prediction of what mobile-box acquisition
    reports per harmonic.
    """
    kernel = SamplingKernel.box(half_width, cutoff)
    kx = centered_wavenumbers(field.coeffs.shape[0])
    omega_x = 2.0 * np.pi * kx / field.lengths[0]
    resp = kernel.response(omega_x)
    coeffs = field.coeffs * resp.reshape((-1,) + (1,) * (field.dimension - 1))
    return HarmonicField(field.lengths, coeffs, field.band)


def combine_orthogonal(first: ReconstructedField,
                       second: ReconstructedField) -> ReconstructedField:
    """Merge two lattice estimates of the same passband bin by bin.

    Where both inputs are replica-free the coefficients are averaged; where
    exactly one is, its value is kept; where neither is, the bin is zeroed
    rather than reporting a contaminated number.  Intended for scans aliased
    along complementary axes, but correct for any pair of estimates carrying
    replica bookkeeping.
    """
    if first.lengths != second.lengths:
        raise ValueError("estimates cover different domains")
    if first.coeffs.shape != second.coeffs.shape:
        raise ValueError("estimates cover different passbands")
    clean_a = ~first.replica_masks()["any"]
    clean_b = ~second.replica_masks()["any"]
    both = clean_a & clean_b
    only_a = clean_a & ~clean_b
    only_b = clean_b & ~clean_a
    coeffs = np.zeros(first.coeffs.shape, dtype=complex)
    coeffs[both] = 0.5 * (first.coeffs[both] + second.coeffs[both])
    coeffs[only_a] = first.coeffs[only_a]
    coeffs[only_b] = second.coeffs[only_b]

    field = HarmonicField(first.lengths, coeffs, first.band)
    meta = {"bins_both_clean": int(both.sum()),
            "bins_first_only": int(only_a.sum()),
            "bins_second_only": int(only_b.sum()),
            "bins_zeroed": int((~(both | only_a | only_b)).sum())}
    extents = tuple(min(a, b) for a, b in zip(first.extents, second.extents))
    counts = tuple(max(a, b) for a, b in zip(first.counts, second.counts))
    return ReconstructedField(field, "combined", counts, extents,
                              first.kernel, meta=meta)

"""Noise-variance analysis, PSD propagation, error metrics, band predictions.

Reconstruction noise variance is the passband integral of the replica-summed,
kernel-weighted noise PSD.  For flat-band spectra every replica term is an
interval overlap with a closed-form antiderivative (identity, clipped
identity, or the sine-integral form of the box response), so those results
are exact; tabulated spectra fall back to a midpoint-rule quadrature with a
deterministic shell-truncation rule for the replica sum.

Conventions: the motion (filtered) axis is axis 0; lattice spacings default
to the passband Nyquist spacing pi/cutoff; a zero along-track spacing is the
dense-sampling sentinel selecting the no-x-replica limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .errors import (ClosedFormError, DivergenceError, LatticeError,
                     UndefinedMetricError)
from .fields import (BandRegion, HarmonicField, NoisePsd,
                     centered_wavenumbers, pad_coefficients)
from .reconstruction import ReconKernel, ReconstructedField
from .sampling import SampleLattice, SamplingKernel
from .trajectories import AffinePath, PerturbedPath, PiecewiseAffinePath

_SHELL_RTOL = 1e-12
_QUAD_NODES = 129

__all__ = [
    "VarianceBreakdown",
    "BandPrediction",
    "PsdTable",
    "AliasEnergy",
    "flat_band_closed_forms",
    "variance_static",
    "variance_mobile_ideal",
    "variance_mobile_box",
    "variance_summary",
    "psd_of_reconstruction",
    "rmse_percent",
    "expected_rmse_percent",
    "alias_energy",
    "oversampling_variance_law",
    "effective_bandwidth",
    "perturbed_band",
]


# ---------------------------------------------------------------------------
# variance breakdown container

@dataclass(frozen=True)
class VarianceBreakdown:
    """Reconstruction noise variances under the three sampling schemes.

    `static` uses pointwise sensors, `mobile_ideal` brick-wall along-track
    filtering, `mobile_box` the box kernel (None when not computed).
    `contributions` maps lattice shift indices to their energy share and
    `method` tags how the numbers were obtained.
    """

    static: float
    mobile_ideal: float
    mobile_box: float = None
    method: str = "quadrature"
    contributions: MappingProxyType = None

    def __post_init__(self):
        for name in ("static", "mobile_ideal", "mobile_box"):
            v = getattr(self, name)
            if v is not None and v < 0.0:
                raise ValueError("%s variance must be nonnegative" % name)
        if self.mobile_ideal > self.static * (1.0 + 1e-9) + 1e-300:
            raise ValueError("mobile-ideal variance cannot exceed static")
        if self.contributions is not None:
            object.__setattr__(self, "contributions",
                               MappingProxyType(dict(self.contributions)))


def flat_band_closed_forms(band_ratio: int, cutoff: float) -> VarianceBreakdown:
    """Closed-form static and mobile-ideal variances for odd flat band ratios.

    With unit-level noise flat on [-a*cutoff, a*cutoff]^2 sampled at the
    passband Nyquist spacing, odd a makes the replica tiling exact and the
    variances collapse to a^2 cutoff^2 / pi^2 and a cutoff^2 / pi^2.
    """
    a = band_ratio
    if a != int(a) or int(a) < 1 or int(a) % 2 == 0:
        raise ClosedFormError(
            "closed form requires a positive odd band ratio, got %r; "
            "use the quadrature routines instead" % (band_ratio,))
    a = int(a)
    if not cutoff > 0.0:
        raise ValueError("cutoff must be strictly positive")
    base = cutoff ** 2 / np.pi ** 2
    return VarianceBreakdown(static=a * a * base, mobile_ideal=a * base,
                             method="closed-form")


# ---------------------------------------------------------------------------
# exact flat-band machinery

def _antiderivative(kernel: SamplingKernel):
    """Antiderivative u -> integral_0^u of the squared kernel response."""
    from .sampling import _sinc_energy_integral
    if kernel is None or kernel.kind == "none":
        return lambda u: u
    if kernel.kind == "ideal":
        c = kernel.cutoff
        return lambda u: float(np.clip(u, -c, c))
    k2 = kernel.gain ** 2 * kernel.half_width / np.pi ** 2
    hw = kernel.half_width
    return lambda u: float(np.sign(u) * k2 * _sinc_energy_integral(hw * abs(u)))


def _flat_axis_terms(cutoff: float, support: float, step,
                     kernel: SamplingKernel = None) -> dict:
    """Replica-shift terms of one axis integral for a flat spectrum.

    Returns {m: integral over [-cutoff, cutoff] of 1_support(w - m*step) *
    |H(w - m*step)|^2 dw} for unit level; `step` None or 0 keeps only m = 0.
    """
    energy = _antiderivative(kernel)
    if not step:
        ms = [0]
        step = 0.0
    else:
        top = int(np.floor((support + cutoff) / step)) + 1
        ms = range(-top, top + 1)
    terms = {}
    for m in ms:
        shift = m * step
        lo = max(-support, -cutoff - shift)
        hi = min(support, cutoff - shift)
        if hi > lo:
            val = energy(hi) - energy(lo)
            if val > 0.0:
                terms[m] = val
    return terms


def _flat_variance(psd: NoisePsd, cutoff: float, steps, kernel: SamplingKernel,
                   breakdown: bool):
    support = psd.support_halfwidth
    axis_terms = []
    for ax, step in enumerate(steps):
        axis_terms.append(_flat_axis_terms(
            cutoff, support, step, kernel if ax == 0 else None))
    norm = psd.level / (2.0 * np.pi) ** psd.dimension
    total = norm * float(np.prod([sum(t.values()) for t in axis_terms]))
    if not breakdown:
        return total
    contributions = {}
    if psd.dimension == 1:
        for m, v in axis_terms[0].items():
            contributions[(m,)] = norm * v
    else:
        for mx, vx in axis_terms[0].items():
            for my, vy in axis_terms[1].items():
                contributions[(mx, my)] = norm * vx * vy
    return total, contributions


# ---------------------------------------------------------------------------
# quadrature machinery for tabulated spectra

def _require_summable(psd: NoisePsd, any_steps: bool):
    if any_steps and not psd.is_summable():
        raise DivergenceError(
            "replica sum diverges: spectral decay exponent %g does not exceed "
            "the dimension %d (white-like noise has unbounded folded variance)"
            % (psd.decay, psd.dimension))


def _shell_shifts(dimension: int, active, radius: int):
    """Integer shift vectors with max |m_i| (over active axes) == radius."""
    ranges = []
    for ax in range(dimension):
        ranges.append(range(-radius, radius + 1) if active[ax] else (0,))
    for m in np.ndindex(*[len(r) for r in ranges]):
        shift = tuple(ranges[ax][m[ax]] for ax in range(dimension))
        if max((abs(s) for ax, s in enumerate(shift) if active[ax]),
               default=0) == radius:
            yield shift


def _grid_variance(psd: NoisePsd, cutoff: float, steps,
                   kernel: SamplingKernel, breakdown: bool,
                   nodes: int = _QUAD_NODES):
    _require_summable(psd, any(bool(s) for s in steps))
    dim = psd.dimension
    axes = [(-cutoff + (np.arange(nodes) + 0.5) * 2.0 * cutoff / nodes)
            for _ in range(dim)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    active = [bool(s) for s in steps]
    cell = (2.0 * cutoff / nodes) ** dim
    norm = cell / (2.0 * np.pi) ** dim

    def term(shift):
        offset = np.array([s * (steps[ax] or 0.0) for ax, s in enumerate(shift)])
        w = mesh + offset
        vals = psd.value(w)
        if kernel is not None and kernel.kind != "none":
            vals = vals * kernel.response(w[..., 0]) ** 2
        return float(vals.sum()) * norm

    contributions = {}
    total = term((0,) * dim)
    if breakdown:
        contributions[(0,) * dim] = total
    if any(active):
        radius = 1
        while True:
            ring = 0.0
            for shift in _shell_shifts(dim, active, radius):
                v = term(shift)
                ring += v
                if breakdown and v != 0.0:
                    contributions[shift] = v
            total += ring
            if radius >= 2 and ring <= _SHELL_RTOL * max(total, 1e-300):
                break
            radius += 1
    return (total, contributions) if breakdown else total


def _dispatch_variance(psd, cutoff, steps, kernel, breakdown):
    if psd.kind == "flat-band":
        return _flat_variance(psd, cutoff, steps, kernel, breakdown)
    return _grid_variance(psd, cutoff, steps, kernel, breakdown)


def _check_dimension(psd: NoisePsd, dimension):
    if dimension is None:
        return psd.dimension
    if int(dimension) != psd.dimension:
        raise ValueError("psd is %d-dimensional, asked for %d"
                         % (psd.dimension, int(dimension)))
    return psd.dimension


def variance_static(psd: NoisePsd, cutoff: float, dimension: int = None,
                    spacing: float = None, breakdown: bool = False):
    """Reconstruction noise variance for pointwise sensors on a lattice.

    Passband [-cutoff, cutoff]^d; replica shifts 2*pi/spacing on every axis
    (spacing defaults to the Nyquist value pi/cutoff, giving shifts of
    2*cutoff).
    """
    dim = _check_dimension(psd, dimension)
    if not cutoff > 0.0:
        raise ValueError("cutoff must be strictly positive")
    spacing = np.pi / cutoff if spacing is None else float(spacing)
    if not spacing > 0.0:
        raise LatticeError("lattice spacing must be strictly positive")
    steps = [2.0 * np.pi / spacing] * dim
    return _dispatch_variance(psd, cutoff, steps, None, breakdown)


def variance_mobile_ideal(psd: NoisePsd, cutoff: float, dimension: int = None,
                          spacing_x: float = None, spacing_y: float = None,
                          breakdown: bool = False):
    """Reconstruction noise variance with brick-wall along-track filtering.

    The axis-0 replicas are weighted by the ideal response at `cutoff` (zero
    at the default Nyquist spacing, so only cross-track shifts survive).
    """
    dim = _check_dimension(psd, dimension)
    if not cutoff > 0.0:
        raise ValueError("cutoff must be strictly positive")
    spacing_x = np.pi / cutoff if spacing_x is None else float(spacing_x)
    steps = [2.0 * np.pi / spacing_x]
    if dim == 2:
        spacing_y = np.pi / cutoff if spacing_y is None else float(spacing_y)
        steps.append(2.0 * np.pi / spacing_y)
    kernel = SamplingKernel.ideal(cutoff)
    return _dispatch_variance(psd, cutoff, steps, kernel, breakdown)


def variance_mobile_box(psd: NoisePsd, cutoff: float, half_width: float,
                        spacing_x: float, spacing_y: float = None,
                        breakdown: bool = False):
    """Reconstruction noise variance with box along-track filtering.

    `spacing_x` = 0 is the dense-sampling sentinel: no along-track replicas,
    only the in-band weighted integral (the limit the ideal kernel attains
    exactly).  Cross-track spacing defaults to Nyquist for 2-d spectra.
    """
    dim = _check_dimension(psd, dimension=None)
    if not cutoff > 0.0:
        raise ValueError("cutoff must be strictly positive")
    if spacing_x < 0.0:
        raise LatticeError("along-track spacing must be nonnegative")
    steps = [None if spacing_x == 0.0 else 2.0 * np.pi / spacing_x]
    if dim == 2:
        spacing_y = np.pi / cutoff if spacing_y is None else float(spacing_y)
        steps.append(2.0 * np.pi / spacing_y)
    kernel = SamplingKernel.box(half_width, cutoff)
    return _dispatch_variance(psd, cutoff, steps, kernel, breakdown)


def variance_summary(psd: NoisePsd, cutoff: float, half_width: float = None,
                     spacing_x: float = None) -> VarianceBreakdown:
    """Static, mobile-ideal and (optionally) mobile-box variances together."""
    static, contributions = variance_static(psd, cutoff, breakdown=True)
    mobile = variance_mobile_ideal(psd, cutoff)
    box = None
    if half_width is not None:
        box = variance_mobile_box(psd, cutoff, half_width,
                                  np.pi / cutoff if spacing_x is None
                                  else spacing_x)
    return VarianceBreakdown(static=static, mobile_ideal=mobile,
                             mobile_box=box, method="quadrature",
                             contributions=contributions)


# ---------------------------------------------------------------------------
# PSD propagation

@dataclass(frozen=True)
class PsdTable:
    """Replica-summed PSD evaluated on the reconstruction harmonic grid."""

    lengths: tuple
    wavenumbers: tuple
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def omega(self, axis: int) -> np.ndarray:
        return 2.0 * np.pi * self.wavenumbers[axis] / self.lengths[axis]

    def integral(self) -> float:
        """Passband integral / (2 pi)^d: the implied reconstruction variance."""
        return float(self.values.sum()) / float(np.prod(self.lengths))


def psd_of_reconstruction(psd: NoisePsd, kernel: SamplingKernel,
                          lattice: SampleLattice,
                          recon_kernel: ReconKernel) -> PsdTable:
    """Propagate a noise PSD through sampling and lattice reconstruction.

    Each passband harmonic receives the replica sum of the input PSD weighted
    by the squared sensor response, scaled by (recon gain / lattice cell)^2;
    with the standard cell-volume gain that factor is 1 and the table entry
    is exactly the folded, filtered PSD at that harmonic.
    """
    if not lattice.is_axis_aligned:
        raise LatticeError("PSD propagation expects an axis-aligned lattice")
    if lattice.dimension != psd.dimension:
        raise ValueError("lattice and psd dimensions differ")
    if len(recon_kernel.cutoffs) != psd.dimension:
        raise ValueError("reconstruction kernel dimension mismatch")
    lengths = tuple(h * n for h, n in zip(lattice.spacings, lattice.counts))
    steps = [2.0 * np.pi / h for h in lattice.spacings]
    _require_summable(psd, True)

    ks = tuple(np.arange(-int(np.floor(c * L / (2 * np.pi) * (1 + 1e-12))),
                         int(np.floor(c * L / (2 * np.pi) * (1 + 1e-12))) + 1)
               for c, L in zip(recon_kernel.cutoffs, lengths))
    mesh = np.stack(np.meshgrid(
        *[2.0 * np.pi * k / L for k, L in zip(ks, lengths)],
        indexing="ij"), axis=-1)
    gain = (recon_kernel.gain / lattice.cell_volume) ** 2

    def fold_at(shift):
        w = mesh + np.array([s * steps[ax] for ax, s in enumerate(shift)])
        vals = psd.value(w)
        if kernel.kind != "none":
            vals = vals * kernel.response(w[..., 0]) ** 2
        return vals

    total = fold_at((0,) * psd.dimension)
    if psd.kind == "flat-band":
        support = psd.support_halfwidth
        tops = [int(np.floor((support + float(np.max(np.abs(mesh[..., ax]))))
                             / steps[ax])) + 1 for ax in range(psd.dimension)]
        for shift in np.ndindex(*[2 * t + 1 for t in tops]):
            m = tuple(s - t for s, t in zip(shift, tops))
            if any(m):
                total = total + fold_at(m)
    else:
        radius = 1
        while True:
            ring = np.zeros_like(total)
            for shift in _shell_shifts(psd.dimension, [True] * psd.dimension,
                                       radius):
                ring = ring + fold_at(shift)
            total = total + ring
            if radius >= 2 and float(ring.sum()) <= _SHELL_RTOL * max(
                    float(total.sum()), 1e-300):
                break
            radius += 1
    return PsdTable(lengths, ks, gain * total)


# ---------------------------------------------------------------------------
# error metrics

def _as_harmonic(obj) -> HarmonicField:
    if isinstance(obj, HarmonicField):
        return obj
    if isinstance(obj, ReconstructedField):
        return obj.field
    field = getattr(obj, "field", None)
    if isinstance(field, HarmonicField):
        return field
    raise TypeError("expected a harmonic field or reconstruction, got %r"
                    % type(obj).__name__)


def _eval_any(obj, points) -> np.ndarray:
    if isinstance(obj, np.ndarray):
        return obj
    if callable(getattr(obj, "eval", None)):
        return np.asarray(obj.eval(points), dtype=float)
    if callable(obj):
        return np.asarray(obj(points), dtype=float)
    raise TypeError("cannot evaluate %r on points" % type(obj).__name__)


def rmse_percent(estimate, truth, points=None) -> float:
    """Relative L2 error of `estimate` against `truth`, in percent.

    With `points` the comparison is pointwise on that grid (required for
    estimators without a harmonic representation); otherwise it is exact on
    the union coefficient grid.  A zero-energy reference is undefined.
    """
    if points is not None:
        a = _eval_any(estimate, points)
        b = _eval_any(truth, points)
        if a.shape != b.shape:
            raise ValueError("estimate and truth grids differ in shape")
        ref = float(np.mean(b ** 2))
        if ref <= 0.0:
            raise UndefinedMetricError("reference field has zero energy")
        return 100.0 * float(np.sqrt(np.mean((a - b) ** 2) / ref))
    fa = _as_harmonic(estimate)
    fb = _as_harmonic(truth)
    if fa.lengths != fb.lengths:
        raise ValueError("estimate and truth cover different domains")
    kmax = tuple(max(x, y) for x, y in zip(fa.kmax, fb.kmax))
    da = pad_coefficients(fa.coeffs, kmax)
    db = pad_coefficients(fb.coeffs, kmax)
    ref = fb.mean_square()
    if ref <= 0.0:
        raise UndefinedMetricError("reference field has zero energy")
    return 100.0 * float(np.sqrt(np.sum(np.abs(da - db) ** 2) / ref))


def expected_rmse_percent(squared_errors, reference_mean_square: float) -> float:
    """Percent RMSE with the expectation taken inside the root.

    `squared_errors` are per-trial squared L2 errors; they are averaged
    before the root, matching the noisy-reconstruction error definition.
    """
    if reference_mean_square <= 0.0:
        raise UndefinedMetricError("reference field has zero energy")
    sq = np.asarray(list(squared_errors), dtype=float)
    if sq.size == 0:
        raise UndefinedMetricError("no trials supplied")
    return 100.0 * float(np.sqrt(np.mean(sq) / reference_mean_square))


@dataclass(frozen=True)
class AliasEnergy:
    """Reconstruction error energy split by the replica shifts that caused it.

    `per_axis[i]` is the energy of the error component contributed by
    replicas displaced only along axis i of the dual lattice, `mixed` by
    diagonally displaced replicas, and `residual` is the exact remainder
    (in-band kernel distortion, interference between shift groups, and
    numerical noise; it can be negative when groups cancel).  The four
    components sum to `total` identically.
    """

    per_axis: tuple
    mixed: float
    residual: float
    total: float

    @property
    def x_energy(self) -> float:
        return self.per_axis[0]

    @property
    def y_energy(self) -> float:
        if len(self.per_axis) < 2:
            raise ValueError("no second axis in a 1-d decomposition")
        return self.per_axis[1]


def alias_energy(recon: ReconstructedField, truth: HarmonicField,
                 passband: BandRegion = None) -> AliasEnergy:
    """Decompose ||recon - lowpass(truth)||^2 by replica provenance.

    Each nonzero dual-lattice shift folds a block of `truth` coefficients
    into the passband grid, weighted by the sensor kernel response at the
    pre-fold frequency; those predicted contributions are grouped by shift
    direction.  `passband` defaults to the reconstruction band and must
    match the estimate's coefficient grid.
    """
    field = recon.field
    if field.lengths != truth.lengths:
        raise ValueError("reconstruction and truth cover different domains")
    if passband is not None:
        for ax, L in enumerate(field.lengths):
            if passband.index_bound(ax, L) != field.kmax[ax]:
                raise ValueError("passband does not match the estimate grid")
    target = np.zeros(field.coeffs.shape, dtype=complex)
    ins = []
    outs = []
    for khat, ktruth in zip(field.kmax, truth.kmax):
        b = min(khat, ktruth)
        ins.append(slice(khat - b, khat + b + 1))
        outs.append(slice(ktruth - b, ktruth + b + 1))
    target[tuple(ins)] = truth.coeffs[tuple(outs)]

    err = field.coeffs - target
    total = float(np.sum(np.abs(err) ** 2))
    dim = field.dimension
    kernel = recon.kernel
    filtered_axis = None
    if kernel is not None and kernel.kind != "none" \
            and recon.scheme == "mobile-lines":
        filtered_axis = 1 if recon.meta.get("transposed") else 0

    kgrids = [centered_wavenumbers(2 * k + 1) for k in field.kmax]
    buffers = [np.zeros(field.coeffs.shape, dtype=complex)
               for _ in range(dim)]
    mixed_buffer = np.zeros(field.coeffs.shape, dtype=complex)
    tops = [(truth.kmax[ax] + field.kmax[ax]) // recon.counts[ax]
            for ax in range(dim)]
    for m in np.ndindex(*[2 * t + 1 for t in tops]):
        shift = tuple(m[ax] - tops[ax] for ax in range(dim))
        if all(s == 0 for s in shift):
            continue
        prefold = [kgrids[ax] + shift[ax] * recon.counts[ax]
                   for ax in range(dim)]
        valid = np.ones(field.coeffs.shape, dtype=bool)
        for ax in range(dim):
            ok = np.abs(prefold[ax]) <= truth.kmax[ax]
            shape = [1] * dim
            shape[ax] = prefold[ax].size
            valid &= ok.reshape(shape)
        if not valid.any():
            continue
        pos = [np.clip(prefold[ax] + truth.kmax[ax], 0,
                       2 * truth.kmax[ax]) for ax in range(dim)]
        vals = truth.coeffs[np.ix_(*pos)] * valid
        if filtered_axis is not None:
            omega = (2.0 * np.pi * prefold[filtered_axis]
                     / field.lengths[filtered_axis])
            shape = [1] * dim
            shape[filtered_axis] = omega.size
            vals = vals * kernel.response(omega).reshape(shape)
        nonzero = [ax for ax in range(dim) if shift[ax] != 0]
        if len(nonzero) == 1:
            buffers[nonzero[0]] += vals
        else:
            mixed_buffer += vals

    per_axis = tuple(float(np.sum(np.abs(b) ** 2)) for b in buffers)
    mixed = float(np.sum(np.abs(mixed_buffer) ** 2))
    residual = total - sum(per_axis) - mixed
    return AliasEnergy(per_axis, mixed, residual, total)


def oversampling_variance_law(k: int, baseline_variance: float) -> float:
    """Predicted reconstruction noise variance at oversampling factor k."""
    if int(k) != k or int(k) < 1:
        raise ValueError("oversampling factor must be an integer >= 1")
    if baseline_variance < 0.0:
        raise ValueError("baseline variance must be nonnegative")
    return baseline_variance / int(k)


# ---------------------------------------------------------------------------
# effective-bandwidth predictions

@dataclass(frozen=True)
class BandPrediction:
    """Predicted band edge (rad/s) for a warped signal, with its pieces."""

    value: float
    segment_terms: tuple
    global_bound: float
    order: int = None

    def __post_init__(self):
        object.__setattr__(self, "segment_terms",
                           tuple(float(t) for t in self.segment_terms))


def _segments_of(path, window):
    if isinstance(path, PerturbedPath):
        base = path.base
        return base.speeds, base.durations
    if isinstance(path, PiecewiseAffinePath):
        return path.speeds, path.durations
    if isinstance(path, AffinePath):
        if window is None:
            raise ValueError("an affine path needs an explicit time window")
        return (np.array([path.speed]),
                np.array([float(window[1]) - float(window[0])]))
    raise TypeError("unsupported path type %r" % type(path).__name__)


def effective_bandwidth(path, field_cutoff: float,
                        window: tuple = None) -> BandPrediction:
    """Predicted band of s(t) = f(x(t)) for a (piecewise-)affine path.

    Per segment the prediction is v_k * cutoff + 1/duration_k; the reported
    value is their maximum and the global bound uses the top speed with the
    shortest duration.
    """
    if not field_cutoff > 0.0:
        raise ValueError("field cutoff must be strictly positive")
    speeds, durations = _segments_of(path, window)
    terms = speeds * field_cutoff + 1.0 / durations
    bound = float(np.max(speeds)) * field_cutoff + 1.0 / float(np.min(durations))
    return BandPrediction(float(np.max(terms)), tuple(terms), bound)


def perturbed_band(path: PerturbedPath, field_cutoff: float,
                   order: int) -> BandPrediction:
    """Band edge of the order-`order` term of a perturbed path's signal.

    The band grows linearly with the perturbation order: top base speed times
    the field cutoff, plus order times the wobble bandwidth, plus the inverse
    of the shortest segment.
    """
    if not isinstance(path, PerturbedPath):
        raise TypeError("expected a perturbed path")
    if int(order) != order or order < 0:
        raise ValueError("perturbation order must be an integer >= 0")
    if not field_cutoff > 0.0:
        raise ValueError("field cutoff must be strictly positive")
    order = int(order)
    base = path.base
    wobble = path.perturbation_bandwidth
    terms = base.speeds * field_cutoff + order * wobble + 1.0 / base.durations
    value = base.max_speed * field_cutoff + order * wobble \
        + 1.0 / float(np.min(base.durations))
    return BandPrediction(value, tuple(terms), value, order=order)

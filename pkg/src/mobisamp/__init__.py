"""mobisamp: sampling and reconstruction of bandlimited fields with
static lattices and moving sensors.

The library models periodic multiharmonic fields, samples them pointwise on
lattices or along sensor trajectories (with optional anti-aliasing kernels,
environmental noise, and measurement noise), reconstructs by spectral
projection, and predicts the resulting noise variances, alias energies, and
bandwidths analytically.  `mobisamp.experiments` and the `mobisamp` CLI wrap
the library in reproducible, self-judging experiment recipes.
"""

from .errors import (ClosedFormError, ConfigError, DivergenceError,
                     EmptyBandError, GridParseError, LatticeError,
                     MobisampError, MonotonicityError, RangeError,
                     UndefinedMetricError)
from .fields import (BandRegion, HarmonicField, NoisePsd, NoiseRealization,
                     ObservedField, centered_wavenumbers, eval_field,
                     export_grid_csv, export_spectrum_csv, fold_coefficients,
                     ingest_grid_csv, pad_coefficients, synthesize_field,
                     synthesize_noise)
from .trajectories import (AffinePath, ParallelLineSet, PerturbedPath,
                           PiecewiseAffinePath, inverse_time, position,
                           speed)
from .sampling import (MeasurementNoise, SampleLattice, SampleSet,
                       SamplingKernel, add_measurement_noise,
                       export_samples_csv, kappa, sample_mobile,
                       sample_mobile_1d, sample_nonuniform, sample_static)
from .reconstruction import (ReconKernel, ReconstructedField,
                             WarpReconstruction, combine_orthogonal,
                             predicted_box_spectrum, reconstruct_1d,
                             reconstruct_lattice, warp_reconstruct)
from .analysis import (AliasEnergy, BandPrediction, PsdTable,
                       VarianceBreakdown, alias_energy, effective_bandwidth,
                       expected_rmse_percent, flat_band_closed_forms,
                       oversampling_variance_law, perturbed_band,
                       psd_of_reconstruction, rmse_percent,
                       variance_mobile_box, variance_mobile_ideal,
                       variance_static, variance_summary)
from .tvdesign import (MovingArrayConfig, OverlapResult, TvSpectrum,
                       max_spacing_rect, max_spacing_wave, overlap_check,
                       path_band, sensor_reduction_factor, temporal_nyquist,
                       tv_rectangle, tv_simulate, tv_wave_cone)
from .config import EXPERIMENT_SPECS, ExperimentConfig, parse_config
from .report import ExperimentReport, MetricRow
from .experiments import available_experiments, run

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "MobisampError", "EmptyBandError", "GridParseError", "MonotonicityError",
    "RangeError", "LatticeError", "DivergenceError", "ClosedFormError",
    "UndefinedMetricError", "ConfigError",
    # fields
    "BandRegion", "HarmonicField", "NoisePsd", "NoiseRealization",
    "ObservedField", "centered_wavenumbers", "pad_coefficients",
    "fold_coefficients", "synthesize_field", "synthesize_noise", "eval_field",
    "export_grid_csv", "ingest_grid_csv", "export_spectrum_csv",
    # trajectories
    "AffinePath", "PiecewiseAffinePath", "PerturbedPath", "ParallelLineSet",
    "position", "speed", "inverse_time",
    # sampling
    "SamplingKernel", "SampleLattice", "SampleSet", "MeasurementNoise",
    "kappa", "sample_static", "sample_mobile", "sample_mobile_1d",
    "sample_nonuniform", "add_measurement_noise", "export_samples_csv",
    # reconstruction
    "ReconKernel", "ReconstructedField", "WarpReconstruction",
    "reconstruct_lattice", "reconstruct_1d", "warp_reconstruct",
    "predicted_box_spectrum", "combine_orthogonal",
    # analysis
    "VarianceBreakdown", "BandPrediction", "PsdTable", "AliasEnergy",
    "flat_band_closed_forms", "variance_static", "variance_mobile_ideal",
    "variance_mobile_box", "variance_summary", "psd_of_reconstruction",
    "rmse_percent", "expected_rmse_percent", "alias_energy",
    "oversampling_variance_law", "effective_bandwidth", "perturbed_band",
    # tv design
    "TvSpectrum", "MovingArrayConfig", "OverlapResult", "tv_rectangle",
    "tv_wave_cone", "path_band", "max_spacing_rect", "max_spacing_wave",
    "temporal_nyquist", "sensor_reduction_factor", "overlap_check",
    "tv_simulate",
    # harness
    "ExperimentConfig", "EXPERIMENT_SPECS", "parse_config",
    "ExperimentReport", "MetricRow", "available_experiments", "run",
]

import csv

import numpy as np
import pytest

from mobisamp import (
    BandRegion,
    GridParseError,
    HarmonicField,
    NoisePsd,
    ObservedField,
    centered_wavenumbers,
    export_grid_csv,
    export_spectrum_csv,
    fold_coefficients,
    ingest_grid_csv,
    pad_coefficients,
    synthesize_field,
    synthesize_noise,
)

TWO_PI = 2.0 * np.pi


def test_centered_wavenumbers():
    assert centered_wavenumbers(5).tolist() == [-2, -1, 0, 1, 2]
    assert centered_wavenumbers(1).tolist() == [0]
    with pytest.raises(ValueError):
        centered_wavenumbers(4)


def test_rectangle_membership_is_closed():
    band = BandRegion.rectangle(3.0, 2.0)
    assert band.contains(np.array([3.0, 2.0]))
    assert band.contains(np.array([-3.0, 0.0]))
    assert not band.contains(np.array([3.0 * (1 + 1e-9), 0.0]))
    assert band.index_bound(0, TWO_PI) == 3
    assert band.index_bound(1, TWO_PI) == 2
    # a half-integer cutoff leaves the nearest harmonic strictly inside
    assert BandRegion.rectangle(8.5).index_bound(0, TWO_PI) == 8


def test_strip_membership():
    band = BandRegion.strip(1.5, bounded_axis=1)
    assert band.index_bound(0, TWO_PI) is None
    assert band.index_bound(1, TWO_PI) == 1
    assert band.contains(np.array([1e6, 1.5]))
    assert not band.contains(np.array([0.0, 1.6]))


def test_wave_cone_membership():
    band = BandRegion.wave_cone(4.0, wave_speed=2.0)
    assert band.halfwidths == (2.0, 4.0)
    assert band.contains(np.array([1.0, 3.0]))
    assert band.contains(np.array([-1.0, -2.0]))
    # outside the bow-tie: |omega_t| < c |omega_x|
    assert not band.contains(np.array([1.0, 1.0]))
    # above the temporal cap
    assert not band.contains(np.array([2.0, 5.0]))


def test_synthesize_is_deterministic():
    band = BandRegion.rectangle(3.0, 3.0)
    a = synthesize_field(7, (TWO_PI, TWO_PI), band, 1.0)
    b = synthesize_field(7, (TWO_PI, TWO_PI), band, 1.0)
    c = synthesize_field(8, (TWO_PI, TWO_PI), band, 1.0)
    assert np.array_equal(a.coeffs, b.coeffs)
    assert not np.array_equal(a.coeffs, c.coeffs)


def test_synthesized_field_is_real_and_confined():
    # the cone leaves corner bins of the coefficient rectangle out of band
    band = BandRegion.wave_cone(3.0, wave_speed=1.0)
    f = synthesize_field(0, (TWO_PI, TWO_PI), band, 2.0)
    assert f.coeffs.shape == (7, 7)
    flipped = np.conj(f.coeffs[::-1, ::-1])
    assert np.max(np.abs(f.coeffs - flipped)) == 0.0
    k = centered_wavenumbers(7)
    outside = np.abs(k)[:, None] > np.abs(k)[None, :]  # c = 1: |k_x| > |k_t|
    assert np.max(np.abs(f.coeffs[outside])) == 0.0
    assert np.any(np.abs(f.coeffs) > 0.0)
    pts = np.random.default_rng(1).uniform(0.0, TWO_PI, size=(40, 2))
    assert f.eval(pts).dtype == np.float64


def test_kmax_caps_the_coefficient_grid():
    band = BandRegion.rectangle(3.0, 3.0)
    f = synthesize_field(0, (TWO_PI, TWO_PI), band, 2.0, kmax=2)
    assert f.coeffs.shape == (5, 5)
    # the strip leaves axis 0 unbounded, so kmax supplies the truncation there
    g = synthesize_field(0, TWO_PI, BandRegion.strip(3.0, bounded_axis=1),
                         1.0, kmax=4)
    assert g.coeffs.shape == (9, 7)


def test_expected_power_is_calibrated():
    band = BandRegion.rectangle(4.0, 4.0)
    power = 2.0
    ms = [synthesize_field(s, (TWO_PI, TWO_PI), band, power).mean_square()
          for s in range(300)]
    assert np.mean(ms) == pytest.approx(power, rel=0.05)


def test_grid_mean_square_matches_parseval():
    # f^2 is bandlimited to twice the field band, so any grid with more than
    # 2 * kmax points per axis integrates it exactly
    band = BandRegion.rectangle(3.0, 4.0)
    f = synthesize_field(3, (TWO_PI, np.pi), band, 2.5)
    assert f.kmax == (3, 2)
    vals = f.grid((9, 7))
    assert np.mean(vals ** 2) == pytest.approx(f.mean_square(), rel=1e-12)


def test_grid_matches_direct_evaluation():
    band = BandRegion.rectangle(2.5, 2.5)
    f = synthesize_field(11, (TWO_PI, TWO_PI), band, 1.0)
    nx, ny = 7, 5
    xs = np.arange(nx) * (TWO_PI / nx)
    ys = np.arange(ny) * (TWO_PI / ny)
    pts = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1)
    assert np.allclose(f.grid((nx, ny)), f.eval(pts), atol=1e-12)


def test_grid_values_fold_matches_pointwise_sum():
    # a grid below Nyquist still reproduces the pointwise values: folding the
    # spectrum and sampling the series agree node by node
    f = synthesize_field(6, TWO_PI, BandRegion.rectangle(6.0), 1.0)
    n = 5
    xs = np.arange(n) * (TWO_PI / n)
    assert np.allclose(f.grid((n,)), f.eval(xs), atol=1e-12)


def test_eval_is_periodic():
    f = synthesize_field(5, 3.0, BandRegion.rectangle(7.0), 1.0)
    t = np.random.default_rng(2).uniform(0.0, 3.0, size=25)
    assert np.allclose(f.eval(t), f.eval(t + 3.0), atol=1e-10)
    assert np.allclose(f.eval(t), f.eval(t - 6.0), atol=1e-10)


def test_dc_only_field_is_constant():
    f = HarmonicField((1.0, 1.0), np.full((1, 1), 4.0 + 0j),
                      BandRegion.rectangle(1.0, 1.0))
    pts = np.random.default_rng(0).uniform(0.0, 1.0, size=(10, 2))
    assert np.allclose(f.eval(pts), 4.0)
    assert f.mean_square() == pytest.approx(16.0)


def test_field_validation_rejects_bad_coefficients():
    band = BandRegion.rectangle(2.0)
    with pytest.raises(ValueError):
        HarmonicField(TWO_PI, np.zeros(4, dtype=complex), band)
    bad = np.zeros(5, dtype=complex)
    bad[3] = 1.0 + 1.0j  # no conjugate partner at k = -1
    with pytest.raises(ValueError):
        HarmonicField(TWO_PI, bad, band)
    leak = np.zeros(7, dtype=complex)
    leak[0] = leak[6] = 1.0  # |k| = 3 sits outside the cutoff of 2
    with pytest.raises(ValueError):
        HarmonicField(TWO_PI, leak, band)


def test_fields_are_immutable():
    f = synthesize_field(0, TWO_PI, BandRegion.rectangle(2.0), 1.0)
    with pytest.raises(ValueError):
        f.coeffs[0] = 1.0


def test_lowpass_trims_high_harmonics():
    f = synthesize_field(4, (TWO_PI, TWO_PI), BandRegion.rectangle(5.0, 5.0), 1.0)
    low = f.lowpass(2.0)
    assert low.coeffs.shape == (5, 5)
    assert np.array_equal(low.coeffs, f.coeffs[3:8, 3:8])
    assert low.mean_square() <= f.mean_square()


def test_transpose_swaps_axes():
    f = synthesize_field(9, (TWO_PI, np.pi), BandRegion.rectangle(3.0, 4.0), 1.0)
    ft = f.transpose()
    assert ft.lengths == (np.pi, TWO_PI)
    pts = np.random.default_rng(3).uniform(0.0, np.pi, size=(20, 2))
    assert np.allclose(ft.eval(pts), f.eval(pts[:, ::-1]), atol=1e-12)


def test_fold_accumulates_residues():
    coeffs = np.arange(1, 8, dtype=complex)  # wavenumbers -3..3
    folded = fold_coefficients(coeffs, (3,))
    assert folded[0] == 1 + 4 + 7  # k = -3, 0, 3
    assert folded[1] == 2 + 5      # k = -2, 1
    assert folded[2] == 3 + 6      # k = -1, 2


def test_pad_preserves_values():
    f = synthesize_field(2, TWO_PI, BandRegion.rectangle(3.0), 1.0)
    padded = pad_coefficients(f.coeffs, 6)
    assert padded.shape == (13,)
    g = HarmonicField(f.lengths, padded, f.band)
    t = np.linspace(0.0, TWO_PI, 17)
    assert np.allclose(g.eval(t), f.eval(t), atol=1e-13)
    with pytest.raises(ValueError):
        pad_coefficients(f.coeffs, 2)


def test_flat_noise_power_matches_psd_integral():
    # unit PSD over [-3 pi, 3 pi]^2 carries mean square (6 pi)^2 / (2 pi)^2 = 9
    psd = NoisePsd.flat_band(3, np.pi)
    ms = [synthesize_noise(s, (9.0, 9.0), psd).field.mean_square()
          for s in range(200)]
    assert np.mean(ms) == pytest.approx(9.0, rel=0.02)


def test_noise_draws_are_deterministic():
    psd = NoisePsd.flat_band(3, np.pi)
    a = synthesize_noise(5, (9.0, 9.0), psd)
    b = synthesize_noise(5, (9.0, 9.0), psd)
    assert np.array_equal(a.field.coeffs, b.field.coeffs)
    assert a.seed == 5


def test_zero_psd_gives_zero_field():
    psd = NoisePsd.flat_band(3, np.pi, level=0.0)
    nu = synthesize_noise(0, (9.0, 9.0), psd)
    assert np.max(np.abs(nu.field.coeffs)) == 0.0


def test_tabulated_psd_interpolation_and_tail():
    radii = np.array([1.0, 2.0, 4.0])
    vals = np.array([1.0, 0.5, 0.1])
    psd = NoisePsd.tabulated(radii, vals, decay=2.5, dimension=1)
    assert psd.value(np.array([1.5])) == pytest.approx(0.75)
    assert psd.value(np.array([8.0])) == pytest.approx(0.1 * 2.0 ** -2.5)
    assert psd.support_halfwidth is None
    assert psd.is_summable()
    assert not NoisePsd.tabulated(radii, vals, decay=1.0, dimension=1).is_summable()
    assert not NoisePsd.tabulated(radii, vals, decay=2.0, dimension=2).is_summable()


def test_observed_field_combines_on_common_grid():
    band = BandRegion.rectangle(2.0, 2.0)
    sig = synthesize_field(1, (9.0, 9.0), band, 1.0)
    noise = synthesize_noise(2, (9.0, 9.0), NoisePsd.flat_band(3, np.pi))
    obs = ObservedField(sig, noise)
    total = obs.combined_coefficients()
    assert total.shape == noise.field.coeffs.shape
    kmax = tuple((n - 1) // 2 for n in total.shape)
    expected = pad_coefficients(sig.coeffs, kmax) + noise.field.coeffs
    assert np.array_equal(total, expected)
    pts = np.random.default_rng(4).uniform(0.0, 9.0, size=(15, 2))
    assert np.allclose(obs.eval(pts), sig.eval(pts) + noise.eval(pts), atol=1e-12)
    assert np.allclose(obs.as_field().eval(pts), obs.eval(pts), atol=1e-12)


def test_grid_csv_round_trip(tmp_path):
    band = BandRegion.rectangle(3.0, 3.0)
    f = synthesize_field(13, (TWO_PI, TWO_PI), band, 1.0)
    path = tmp_path / "grid.csv"
    export_grid_csv(f, path, (7, 7), seed=13)
    g = ingest_grid_csv(path, (TWO_PI, TWO_PI), band)
    assert g.coeffs.shape == f.coeffs.shape
    assert np.allclose(g.coeffs, f.coeffs, atol=1e-12)


def test_grid_csv_round_trip_even_counts(tmp_path):
    # even grids carry a shared Nyquist bin; the import splits it across +-n/2
    band = BandRegion.rectangle(3.0, 3.0)
    f = synthesize_field(14, (TWO_PI, TWO_PI), band, 1.0)
    path = tmp_path / "grid.csv"
    export_grid_csv(f, path, (8, 8))
    g = ingest_grid_csv(path, (TWO_PI, TWO_PI), band)
    assert g.coeffs.shape == (9, 9)
    assert np.allclose(g.coeffs, pad_coefficients(f.coeffs, (4, 4)), atol=1e-12)


def test_grid_csv_round_trip_1d(tmp_path):
    band = BandRegion.rectangle(4.0)
    f = synthesize_field(15, TWO_PI, band, 1.0)
    path = tmp_path / "grid.csv"
    export_grid_csv(f, path, 9)
    g = ingest_grid_csv(path, TWO_PI, band)
    assert np.allclose(g.coeffs, f.coeffs, atol=1e-12)


def test_grid_csv_rows_run_along_y(tmp_path):
    coeffs = np.zeros((3, 3), dtype=complex)
    coeffs[2, 1] = coeffs[0, 1] = 0.5  # pure cosine along x, constant in y
    f = HarmonicField((1.0, 1.0), coeffs, BandRegion.rectangle(7.0, 7.0))
    path = tmp_path / "grid.csv"
    export_grid_csv(f, path, (4, 3))
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if not r[0].startswith("#")]
    data = np.array(rows, dtype=float)
    assert data.shape == (3, 4)  # y runs down the file, x across
    assert np.allclose(data, data[0])
    xs = np.arange(4) / 4.0
    assert np.allclose(data[0], np.cos(2.0 * np.pi * xs), atol=1e-12)


def test_grid_csv_parse_errors(tmp_path):
    band = BandRegion.rectangle(3.0)
    bad = tmp_path / "bad.csv"
    bad.write_text("# header\n1.0,2.0,3.0\n1.0,oops,3.0\n")
    with pytest.raises(GridParseError, match="row 2, column 2"):
        ingest_grid_csv(bad, TWO_PI, band)
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1.0,2.0\n1.0\n")
    with pytest.raises(GridParseError, match="row 2"):
        ingest_grid_csv(ragged, TWO_PI, band)
    empty = tmp_path / "empty.csv"
    empty.write_text("# nothing here\n")
    with pytest.raises(GridParseError, match="no data rows"):
        ingest_grid_csv(empty, TWO_PI, band)


def test_spectrum_csv_layout(tmp_path):
    f = synthesize_field(1, TWO_PI, BandRegion.rectangle(2.0), 1.0)
    path = tmp_path / "spec.csv"
    export_spectrum_csv(f, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "k,re,im"
    assert len(lines) == 1 + 5
    assert [int(line.split(",")[0]) for line in lines[1:]] == [-2, -1, 0, 1, 2]

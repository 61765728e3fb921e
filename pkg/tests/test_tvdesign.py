import numpy as np
import pytest

from mobisamp import (
    BandRegion,
    LatticeError,
    MovingArrayConfig,
    RangeError,
    max_spacing_rect,
    max_spacing_wave,
    overlap_check,
    path_band,
    sensor_reduction_factor,
    temporal_nyquist,
    tv_rectangle,
    tv_simulate,
    tv_wave_cone,
)

TWO_PI = 2.0 * np.pi


def safe_period(spectrum, speed, factor=0.9):
    return factor * np.pi / path_band(spectrum, speed)


# --- closed-form calculators ---------------------------------------------------

def test_path_band_rectangle():
    spec = tv_rectangle(4.5, 7.4)
    assert path_band(spec, 0.0) == pytest.approx(7.4)
    assert path_band(spec, 2.0) == pytest.approx(7.4 + 2.0 * 4.5)
    with pytest.raises(RangeError):
        path_band(spec, -1.0)
    with pytest.raises(ValueError):
        path_band(BandRegion.strip(3.0, bounded_axis=0), 1.0)


def test_path_band_wave_cone_matches_brute_force():
    rho_t, c, v = 5.0, 1.7, 0.8
    spec = tv_wave_cone(rho_t, c)
    wt = np.linspace(-rho_t, rho_t, 1001)
    edges = np.linspace(-1.0, 1.0, 1001)
    # grid over the bow-tie; includes the extreme corners exactly
    vals = v * (edges[:, None] * np.abs(wt)[None, :] / c) + wt[None, :]
    assert path_band(spec, v) == pytest.approx(float(vals.max()), rel=1e-6)
    assert path_band(spec, v) == pytest.approx(rho_t * (1.0 + v / c))


def test_max_spacing_rect_branches():
    assert max_spacing_rect(0.0, 2.0, 5.0) == pytest.approx(np.pi / 2.0)
    crossover = 5.0 / 2.0
    assert max_spacing_rect(crossover, 2.0, 5.0) == pytest.approx(np.pi / 2.0)
    assert max_spacing_rect(2 * crossover, 2.0, 5.0) == pytest.approx(np.pi)
    with pytest.raises(RangeError):
        max_spacing_rect(1.0, 0.0, 5.0)


def test_max_spacing_wave_values():
    assert max_spacing_wave(0.0, 2.0, 3.0) == pytest.approx(np.pi / 3.0)
    assert max_spacing_wave(1.0, 2.0, 3.0) == pytest.approx(1.5 * np.pi / 3.0)
    with pytest.raises(RangeError, match="not below the propagation speed"):
        max_spacing_wave(2.0, 2.0, 3.0)
    with pytest.raises(RangeError):
        max_spacing_wave(-0.1, 2.0, 3.0)


def test_temporal_nyquist_monotone_in_speed():
    rect = tv_rectangle(2.0, 5.0)
    cone = tv_wave_cone(5.0, 1.3)
    assert temporal_nyquist(rect, 0.0) == pytest.approx(5.0 / np.pi)
    speeds = np.linspace(0.0, 4.0, 100)
    for spec in (rect, cone):
        rates = [temporal_nyquist(spec, v) for v in speeds]
        assert all(b >= a for a, b in zip(rates, rates[1:]))


def test_sensor_reduction_factor():
    assert sensor_reduction_factor(5.0, 2.0, 5.0) == pytest.approx(0.5)
    assert sensor_reduction_factor(2.5 * (1 + 1e-9), 2.0, 5.0) == \
        pytest.approx(1.0, rel=1e-6)
    with pytest.raises(RangeError, match="no reduction in this regime"):
        sensor_reduction_factor(2.5, 2.0, 5.0)
    rng = np.random.default_rng(8)
    for _ in range(50):
        rho_x, rho_t = rng.uniform(0.5, 4.0, 2)
        v = rng.uniform(1.01, 5.0) * rho_t / rho_x
        ratio = max_spacing_rect(0.0, rho_x, rho_t) / \
            max_spacing_rect(v, rho_x, rho_t)
        assert sensor_reduction_factor(v, rho_x, rho_t) == \
            pytest.approx(ratio, rel=1e-12)


def test_moving_array_config_validation():
    with pytest.raises(ValueError):
        MovingArrayConfig(spacing=0.0, speed=1.0, period=1.0)
    with pytest.raises(ValueError):
        MovingArrayConfig(spacing=1.0, speed=-1.0, period=1.0)
    cfg = MovingArrayConfig(spacing=0.5, speed=0.3, period=2.0)
    gen = cfg.lattice_generators()
    dual = cfg.dual_generators()
    assert np.allclose(gen @ dual.T, TWO_PI * np.eye(2), atol=1e-12)


# --- geometric overlap checker ---------------------------------------------------

def test_overlap_check_inside_all_limits():
    spec = tv_rectangle(4.5, 7.4)
    cfg = MovingArrayConfig(spacing=0.9 * max_spacing_rect(2.0, 4.5, 7.4),
                            speed=2.0, period=safe_period(spec, 2.0))
    out = overlap_check(spec, cfg)
    assert out.alias_free
    assert out.verdict == "alias-free"
    assert out.witness_index is None
    # bow-tie replicas can enter the bounding box without touching the region
    cone = tv_wave_cone(3.0, 1.0)
    tight = MovingArrayConfig(spacing=0.999 * max_spacing_wave(0.5, 1.0, 3.0),
                              speed=0.5, period=safe_period(cone, 0.5))
    checked = overlap_check(cone, tight)
    assert checked.alias_free
    assert checked.shifts_checked > 0


def test_overlap_check_reports_a_true_witness():
    spec = tv_rectangle(4.5, 7.4)
    cfg = MovingArrayConfig(spacing=1.1 * max_spacing_rect(2.0, 4.5, 7.4),
                            speed=2.0, period=safe_period(spec, 2.0))
    out = overlap_check(spec, cfg)
    assert not out.alias_free
    n1, n2 = out.witness_index
    assert (n1, n2) != (0, 0)
    shift = np.array([n1, n2], dtype=float) @ cfg.dual_generators()
    assert np.allclose(shift, out.witness_shift, atol=1e-12)
    assert abs(shift[0]) < 2 * 4.5 and abs(shift[1]) < 2 * 7.4


@pytest.mark.parametrize("kind", ["rectangle", "wave-cone"])
def test_overlap_check_agrees_with_closed_forms(kind):
    rng = np.random.default_rng(99 if kind == "rectangle" else 100)
    for _ in range(100):
        if kind == "rectangle":
            v = rng.uniform(0.05, 3.0)
            rho_x, rho_t = rng.uniform(0.5, 4.0, 2)
            spec = tv_rectangle(rho_x, rho_t)
            limit = max_spacing_rect(v, rho_x, rho_t)
        else:
            c = rng.uniform(0.5, 3.0)
            v = rng.uniform(0.05, 0.95) * c
            rho_t = rng.uniform(0.5, 4.0)
            spec = tv_wave_cone(rho_t, c)
            limit = max_spacing_wave(v, c, rho_t / c)
        period = safe_period(spec, v)
        below = MovingArrayConfig(spacing=0.999 * limit, speed=v, period=period)
        above = MovingArrayConfig(spacing=1.001 * limit, speed=v, period=period)
        assert overlap_check(spec, below).alias_free
        assert not overlap_check(spec, above).alias_free


def test_overlap_verdict_is_skew_invariant():
    # adding one spacing of advance per period relabels the same lattice
    spec = tv_rectangle(4.5, 7.4)
    for spacing in (0.6, 0.9):
        cfg = MovingArrayConfig(spacing=spacing, speed=2.0, period=0.15)
        skewed = MovingArrayConfig(spacing=spacing,
                                   speed=2.0 + spacing / 0.15, period=0.15)
        assert overlap_check(spec, cfg).verdict == \
            overlap_check(spec, skewed).verdict


# --- space-time simulation ---------------------------------------------------------

def test_tv_simulate_alias_free_is_exact():
    spec = tv_rectangle(4.5, 7.4)
    cfg = MovingArrayConfig(spacing=TWO_PI / 8, speed=2.0, period=TWO_PI / 33)
    assert overlap_check(spec, cfg).alias_free
    assert tv_simulate(spec, cfg, seed=5, lengths=(TWO_PI, TWO_PI)) < 1e-8


def test_tv_simulate_overlapping_config_fails_loudly():
    spec = tv_rectangle(4.5, 7.4)
    cfg = MovingArrayConfig(spacing=TWO_PI / 7, speed=2.0, period=TWO_PI / 33)
    assert not overlap_check(spec, cfg).alias_free
    assert tv_simulate(spec, cfg, seed=5, lengths=(TWO_PI, TWO_PI)) > 1.0


def test_tv_simulate_error_jumps_at_the_limit():
    spec = tv_rectangle(4.5, 7.4)
    clean, aliased = [], []
    for n1 in range(5, 13):
        cfg = MovingArrayConfig(spacing=TWO_PI / n1, speed=2.0,
                                period=TWO_PI / 33)
        err = tv_simulate(spec, cfg, seed=11, lengths=(TWO_PI, TWO_PI))
        (clean if overlap_check(spec, cfg).alias_free else aliased).append(err)
    assert clean and aliased
    assert max(clean) < 1e-8
    assert min(aliased) >= 10.0 * max(max(clean), 1e-12)


def test_tv_simulate_constructs_compatible_domain():
    spec = tv_rectangle(4.5, 7.4)
    cfg = MovingArrayConfig(spacing=0.5, speed=1.0, period=0.125)
    assert overlap_check(spec, cfg).alias_free
    assert tv_simulate(spec, cfg, seed=3) < 1e-8


def test_tv_simulate_rejects_incompatible_domains():
    spec = tv_rectangle(4.5, 7.4)
    with pytest.raises(LatticeError):
        tv_simulate(spec, MovingArrayConfig(spacing=1.0, speed=1.0, period=1.0),
                    seed=0, lengths=(TWO_PI, TWO_PI))
    with pytest.raises(LatticeError):  # non-integer shear speed*L_t/L_x
        tv_simulate(spec, MovingArrayConfig(spacing=TWO_PI / 8, speed=1.3,
                                            period=TWO_PI / 33),
                    seed=0, lengths=(TWO_PI, TWO_PI))
    with pytest.raises(LatticeError, match="not a small rational"):
        tv_simulate(spec, MovingArrayConfig(spacing=1.0, speed=1.0,
                                            period=np.pi / 3), seed=0)


def test_tv_simulate_deterministic_per_seed():
    spec = tv_rectangle(4.5, 7.4)
    cfg = MovingArrayConfig(spacing=TWO_PI / 7, speed=2.0, period=TWO_PI / 33)
    a = tv_simulate(spec, cfg, seed=5, lengths=(TWO_PI, TWO_PI))
    b = tv_simulate(spec, cfg, seed=5, lengths=(TWO_PI, TWO_PI))
    c = tv_simulate(spec, cfg, seed=6, lengths=(TWO_PI, TWO_PI))
    assert a == b
    assert a != c

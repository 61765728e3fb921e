"""Acceptance gate: ten end-to-end criteria with pinned tolerances.

Each test drives the shipped experiment pipeline (not reimplementations),
re-checks the reported values against the declared thresholds, and prints a
single PASS/FAIL verdict line with its runtime budget.
"""

import time

import numpy as np

from mobisamp import flat_band_closed_forms
from mobisamp.cli import main
from mobisamp.config import parse_config
from mobisamp.experiments import run


def _rows(report):
    return {row.name: row for row in report.metrics}


def _finish(number, label, elapsed, budget, checks):
    ok = all(flag for _, flag in checks)
    print("criterion %2d  %-38s %s  [%5.1fs / budget %ds]"
          % (number, label, "PASS" if ok else "FAIL", elapsed, budget))
    failed = [name for name, flag in checks if not flag]
    assert ok, "failed checks: %s" % ", ".join(failed)
    assert elapsed <= budget, "budget exceeded: %.1fs > %ds" % (elapsed,
                                                                budget)


def test_criterion_01_flat_band_noise_variances(tmp_path):
    t0 = time.time()
    checks = []
    for a in (3, 5, 7):
        closed = flat_band_closed_forms(a, np.pi)
        checks.append(("closed-static-a%d-exact" % a,
                       closed.static == float(a * a)))
        checks.append(("closed-mobile-a%d-exact" % a,
                       closed.mobile_ideal == float(a)))
    report = run("noise-variance", out_dir=tmp_path)
    rows = _rows(report)
    for a in (3, 5, 7):
        quad_s = rows["quad-static-a%d" % a]
        quad_m = rows["quad-mobile-a%d" % a]
        checks.append(("quad-static-a%d" % a,
                       abs(quad_s.value - a * a) <= 1e-9 * a * a))
        checks.append(("quad-mobile-a%d" % a,
                       abs(quad_m.value - a) <= 1e-9 * a))
        mc_s = rows["mc-static-a%d" % a]
        mc_m = rows["mc-mobile-a%d" % a]
        checks.append(("mc-static-a%d-5pct" % a,
                       mc_s.seeds == 500
                       and abs(mc_s.value - a * a) <= 0.05 * a * a))
        checks.append(("mc-mobile-a%d-5pct" % a,
                       mc_m.seeds == 500
                       and abs(mc_m.value - a) <= 0.05 * a))
    _finish(1, "flat-band noise variances", time.time() - t0, 120, checks)


def test_criterion_02_noise_suppression_ratio(tmp_path):
    t0 = time.time()
    report = run("noise-suppression", out_dir=tmp_path)
    row = _rows(report)["rms-ratio-a9"]
    checks = [
        ("200-seeds", row.seeds == 200),
        ("ratio-sqrt-a-20pct", abs(row.value - 3.0) <= 0.20 * 3.0),
    ]
    _finish(2, "static/mobile noise RMS ratio", time.time() - t0, 180,
            checks)


def test_criterion_03_exact_reconstruction(tmp_path):
    t0 = time.time()
    report = run("exact-reconstruction", out_dir=tmp_path)
    rows = _rows(report)
    checks = [
        ("static-error-below-1e-10", rows["static-rel-error"].value < 1e-10),
        ("mobile-error-below-1e-10", rows["mobile-rel-error"].value < 1e-10),
    ]
    _finish(3, "exact Nyquist reconstruction", time.time() - t0, 10, checks)


def test_criterion_04_directional_alias_suppression(tmp_path):
    t0 = time.time()
    report = run("alias-directions", out_dir=tmp_path)
    rows = _rows(report)
    combined = rows["combined-rmse-percent"]
    checks = [
        ("mobile-x-alias-fraction-below-1e-10",
         rows["mobile-x-alias-fraction"].value < 1e-10),
        ("static-x-alias-positive", rows["static-x-alias"].value > 0.0),
        ("static-y-alias-positive", rows["static-y-alias"].value > 0.0),
        ("combined-beats-both-scans", combined.value <= combined.target),
    ]
    _finish(4, "directional alias suppression", time.time() - t0, 30, checks)


def test_criterion_05_oversampling_law(tmp_path):
    t0 = time.time()
    report = run("oversampling", out_dir=tmp_path)
    rows = _rows(report)
    checks = []
    for k in (1, 2, 4, 8):
        row = rows["variance-k%d" % k]
        checks.append(("variance-k%d-10pct" % k,
                       row.seeds == 500
                       and abs(row.value - row.target)
                       <= 0.10 * abs(row.target)))
    slope = rows["loglog-slope"]
    checks.append(("slope-minus-one", abs(slope.value - (-1.0)) <= 0.05))
    _finish(5, "1/k oversampling", time.time() - t0, 120, checks)


def test_criterion_06_box_filter_limits(tmp_path):
    t0 = time.time()
    report = run("box-kernel", out_dir=tmp_path)
    rows = _rows(report)
    narrow = rows["box-variance-narrow"]
    checks = [
        ("kappa-ratio-1e-3", abs(rows["kappa-ratio-narrow"].value - 1.0)
         <= 1e-3),
        ("narrow-box-matches-ideal-1e-3",
         abs(narrow.value - narrow.target) <= 1e-3 * abs(narrow.target)),
        ("per-harmonic-1e-3", rows["harmonic-max-rel-dev"].value < 1e-3),
    ]
    _finish(6, "box-filter limits", time.time() - t0, 60, checks)


def test_criterion_07_warped_reconstruction(tmp_path):
    t0 = time.time()
    report = run("warped-speed", out_dir=tmp_path)
    rows = _rows(report)
    ratio = rows["distortion-ratio-max"]
    checks = [
        ("50-paths", ratio.seeds == 50),
        ("distortion-within-1.05-speed-bound", ratio.value <= 1.05),
        ("affine-case-exact", rows["affine-rel-error"].value < 1e-10),
    ]
    _finish(7, "warped-speed distortion bound", time.time() - t0, 120,
            checks)


def test_criterion_08_path_bandwidth(tmp_path):
    t0 = time.time()
    report = run("path-bandwidth", out_dir=tmp_path)
    rows = _rows(report)
    energy = rows["band-energy-fraction-mean"]
    slope = rows["perturbation-power-slope"]
    checks = [
        ("20-cases", energy.seeds == 20),
        ("99pct-energy-in-band", energy.value >= 0.99),
        ("epsilon-power-slope-4", abs(slope.value - 4.0) <= 0.5),
    ]
    _finish(8, "path bandwidth predictions", time.time() - t0, 120, checks)


def test_criterion_09_time_varying_design(tmp_path):
    t0 = time.time()
    report = run("tv-design", out_dir=tmp_path)
    rows = _rows(report)
    rect = rows["rect-limit-agreement"]
    cone = rows["cone-limit-agreement"]
    checks = [
        ("200-configs", rect.seeds + cone.seeds == 200),
        ("rect-agreement", rect.value == 1.0),
        ("cone-agreement", cone.value == 1.0),
        ("inside-rmse-below-1e-8",
         rows["simulate-inside-rmse"].value < 1e-8),
        ("outside-at-least-10x", rows["simulate-outside-ratio"].value
         >= 10.0),
    ]
    _finish(9, "time-varying design limits", time.time() - t0, 120, checks)


def test_criterion_10_determinism_and_reporting(tmp_path):
    t0 = time.time()
    cfg = parse_config("experiment: alias-directions\nseed: 2\n")
    run("alias-directions", cfg, out_dir=tmp_path / "one")
    run("alias-directions", cfg, out_dir=tmp_path / "two")
    identical = (tmp_path / "one" / "report.csv").read_bytes() == \
        (tmp_path / "two" / "report.csv").read_bytes()

    ok_exit = main(["run", "exact-reconstruction",
                    "--out", str(tmp_path / "ok")])
    strict = tmp_path / "strict.yaml"
    strict.write_text("experiment: exact-reconstruction\n"
                      "params:\n  tol: 0.0\n", encoding="utf-8")
    fail_exit = main(["run", "exact-reconstruction", "--config", str(strict),
                      "--out", str(tmp_path / "fail")])
    checks = [
        ("byte-identical-reports", identical),
        ("cli-exit-0-on-pass", ok_exit == 0),
        ("cli-exit-1-on-tolerance-failure", fail_exit == 1),
    ]
    _finish(10, "determinism and reporting", time.time() - t0, 10, checks)

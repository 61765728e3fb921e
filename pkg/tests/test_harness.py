import hashlib

import numpy as np
import pytest

from mobisamp import (
    ClosedFormError,
    ConfigError,
    DivergenceError,
    EmptyBandError,
    GridParseError,
    LatticeError,
    MobisampError,
    MonotonicityError,
    RangeError,
    UndefinedMetricError,
)
from mobisamp.cli import main
from mobisamp.config import EXPERIMENT_SPECS, default_config, parse_config
from mobisamp.experiments import available_experiments, run
from mobisamp.plots import PLOT_KINDS, emit_plot
from mobisamp.report import ExperimentReport, MetricRow, write_report_csv


# --- error taxonomy -----------------------------------------------------------

def test_every_error_is_a_value_error():
    for err in (EmptyBandError, GridParseError, MonotonicityError, RangeError,
                LatticeError, DivergenceError, ClosedFormError,
                UndefinedMetricError, ConfigError):
        assert issubclass(err, MobisampError)
        assert issubclass(err, ValueError)


# --- config parsing -----------------------------------------------------------

GOOD_TEXT = """\
experiment: noise-variance
seed: 7
trials: 12
output: runs/demo
params:
  rho: 2.5
  a_values: [3, 5]
"""


def test_parse_config_happy_path():
    cfg = parse_config(GOOD_TEXT)
    assert cfg.experiment == "noise-variance"
    assert cfg.seed == 7
    assert cfg.trials == 12 and cfg.resolved_trials == 12
    assert cfg.output == "runs/demo"
    assert cfg.params["rho"] == 2.5
    assert cfg.params["a_values"] == (3, 5)
    assert cfg.params["length"] == 9.0  # schema default filled in
    assert cfg.raw_text == GOOD_TEXT
    assert cfg.text_sha256() == \
        hashlib.sha256(GOOD_TEXT.encode("utf-8")).hexdigest()


def test_default_config_uses_recipe_trials():
    cfg = default_config("oversampling", seed=3)
    assert cfg.trials is None
    assert cfg.resolved_trials == EXPERIMENT_SPECS["oversampling"]["trials"]
    assert cfg.seed == 3
    with pytest.raises(ConfigError, match="available"):
        default_config("nope")


@pytest.mark.parametrize("text,fragment", [
    ("", "empty config"),
    ("- a\n- b\n", "expected a mapping"),
    ("experiment: [unclosed\n", "invalid config syntax"),
    ("seed: 1\n", "experiment: missing required key"),
    ("experiment: frobnicate\n", "unknown experiment 'frobnicate'"),
    ("experiment: noise-variance\nbogus: 1\n",
     "bogus: unknown key (known keys: experiment, output, params, seed, "
     "trials)"),
    ("experiment: noise-variance\nseed: -2\n", "seed: must be nonnegative"),
    ("experiment: noise-variance\nseed: true\n",
     "seed: expected an integer, got bool True"),
    ("experiment: noise-variance\ntrials: 0\n", "trials: must be at least 1"),
    ("experiment: noise-variance\noutput: 9\n",
     "output: expected a string, got int 9"),
    ("experiment: noise-variance\nparams: [1]\n",
     "params: expected a mapping"),
    ("experiment: noise-variance\nparams:\n  rhoo: 1\n",
     "params.rhoo: unknown key (known keys: a_values, length, rho)"),
    ("experiment: noise-variance\nparams:\n  rho: true\n",
     "params.rho: expected a number, got bool True"),
    ("experiment: noise-variance\nparams:\n  rho: [1]\n",
     "params.rho: expected a number, got list"),
    ("experiment: noise-variance\nparams:\n  a_values: 3\n",
     "params.a_values: expected a list, got int 3"),
    ("experiment: noise-variance\nparams:\n  a_values: [3, 4.5]\n",
     "params.a_values[1]: expected an integer, got float 4.5"),
])
def test_parse_config_rejections(text, fragment):
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert fragment in str(excinfo.value)


def test_every_recipe_has_a_runnable_spec():
    assert set(available_experiments()) == set(EXPERIMENT_SPECS)
    for name, spec in EXPERIMENT_SPECS.items():
        assert spec["trials"] >= 1
        cfg = default_config(name)
        assert cfg.params.keys() == spec["params"].keys()


# --- report objects ------------------------------------------------------------

def test_metric_row_comparisons():
    assert MetricRow("m", 1.05, 1.0, 0.1, "rel").passed
    assert not MetricRow("m", 1.2, 1.0, 0.1, "rel").passed
    assert MetricRow("m", 1.05, 1.0, 0.1, "abs").passed
    assert MetricRow("m", 0.5, 1.0, 0.0, "le").passed
    assert not MetricRow("m", 1.5, 1.0, 0.0, "lt").passed
    assert MetricRow("m", 1.5, 1.0, 0.0, "ge").passed
    assert not MetricRow("m", 1.0, 1.0, 0.0, "gt").passed
    assert MetricRow("m", 1.0, 1.0, 0.0, "eq").passed
    with pytest.raises(ValueError, match="unknown comparison"):
        MetricRow("m", 1.0, 1.0, 0.0, "approx")


def test_report_aggregation_and_csv(tmp_path):
    report = ExperimentReport("demo", config_sha256="abc123", seed=4, trials=2)
    report.add("good", 1.0, 1.0, 0.1, "rel", method="closed-form", seeds=2)
    report.add("bad", 2.0, 1.0, 0.1, "rel", method="monte-carlo", seeds=2)
    report.add_artifact("data.csv")
    assert not report.passed
    assert [row.name for row in report.failures()] == ["bad"]

    path = tmp_path / "report.csv"
    write_report_csv(report, path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    assert "# experiment = demo" in lines
    assert "# config_sha256 = abc123" in lines
    assert "# seed = 4" in lines
    assert "# artifact = data.csv" in lines
    assert "name,value,target,tolerance,comparison,method,seeds,passed" \
        in lines
    assert any(line.startswith("good,") and line.endswith(",pass")
               for line in lines)
    assert any(line.startswith("bad,") and line.endswith(",FAIL")
               for line in lines)


# --- plots -----------------------------------------------------------------------

def test_emit_plot_validation(tmp_path):
    with pytest.raises(ValueError, match="unknown plot kind"):
        emit_plot({"a": ([1], [1])}, "pie", tmp_path / "x.svg")
    with pytest.raises(ValueError, match="no data series"):
        emit_plot({}, "variance-vs-a", tmp_path / "x.svg")
    with pytest.raises(ValueError, match="is empty"):
        emit_plot({"a": ([], [])}, "variance-vs-a", tmp_path / "x.svg")
    assert "spacing-sweep" in PLOT_KINDS


def test_emit_plot_line_outputs(tmp_path):
    series = {"measured": ([1, 2, 4], [1.0, 0.5, 0.25]), "limit": 2.0}
    svg, csv_path = emit_plot(series, "spacing-sweep", tmp_path / "p.svg")
    svg_text = (tmp_path / "p.svg").read_text(encoding="utf-8")
    assert svg_text.lstrip().startswith("<?xml")
    data = (tmp_path / "p.csv").read_text(encoding="utf-8").splitlines()
    assert data[0] == "series,x,y"
    assert data[1] == "measured,1,1"
    assert len(data) == 4  # scalar 'limit' annotation never becomes a row


def test_emit_plot_heatmap_outputs(tmp_path):
    grid = np.arange(6, dtype=float).reshape(2, 3)
    emit_plot({"grid": grid, "extent": (0, 1, 0, 1)}, "spectrum-heatmap",
              tmp_path / "h.svg")
    rows = (tmp_path / "h.csv").read_text(encoding="utf-8").splitlines()
    assert rows[0] == "i,j,value"
    assert rows[1] == "0,0,0"
    assert len(rows) == 1 + grid.size


def test_emit_plot_is_deterministic(tmp_path):
    series = {"a": ([1, 2, 3], [3.0, 1.0, 2.0])}
    emit_plot(series, "variance-vs-a", tmp_path / "one.svg")
    emit_plot(series, "variance-vs-a", tmp_path / "two.svg")
    assert (tmp_path / "one.svg").read_bytes() == \
        (tmp_path / "two.svg").read_bytes()
    assert (tmp_path / "one.csv").read_bytes() == \
        (tmp_path / "two.csv").read_bytes()


# --- experiment runner -------------------------------------------------------------

def test_run_writes_the_advertised_artifacts(tmp_path):
    out = tmp_path / "exact"
    cfg = parse_config("experiment: exact-reconstruction\nseed: 1\n")
    report = run("exact-reconstruction", cfg, out_dir=out)
    assert report.passed
    assert (out / "report.csv").exists()
    assert (out / "run_meta.json").exists()
    assert (out / "exact-reconstruction.csv").exists()
    assert (out / "config.echo").read_bytes() == cfg.raw_text.encode("utf-8")
    text = (out / "report.csv").read_text(encoding="utf-8")
    assert "# config_sha256 = %s" % cfg.text_sha256() in text
    for name in report.artifacts:
        assert (out / name).exists()


def test_run_rejects_bad_names_and_mismatched_configs(tmp_path):
    with pytest.raises(ConfigError, match="alias-directions"):
        run("not-a-recipe", out_dir=tmp_path)
    cfg = parse_config("experiment: oversampling\n")
    with pytest.raises(ConfigError, match="config is for experiment"):
        run("exact-reconstruction", cfg, out_dir=tmp_path)


def test_run_outputs_are_byte_identical(tmp_path):
    cfg = parse_config("experiment: alias-directions\nseed: 2\n")
    run("alias-directions", cfg, out_dir=tmp_path / "one")
    run("alias-directions", cfg, out_dir=tmp_path / "two")
    for name in ("report.csv", "config.echo", "alias-directions.csv",
                 "alias-directions-plot.svg", "alias-directions-plot.csv"):
        assert (tmp_path / "one" / name).read_bytes() == \
            (tmp_path / "two" / name).read_bytes(), name


# --- command-line interface ----------------------------------------------------------

def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in EXPERIMENT_SPECS:
        assert name in out


def test_cli_no_command_prints_help(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().out.lower()


def test_cli_validate(tmp_path, capsys):
    path = tmp_path / "good.yaml"
    path.write_text("experiment: oversampling\nseed: 5\n", encoding="utf-8")
    assert main(["validate", "--config", str(path)]) == 0
    out = capsys.readouterr().out
    assert "config OK" in out and "experiment=oversampling" in out

    bad = tmp_path / "bad.yaml"
    bad.write_text("experiment: oversampling\nrho: 1\n", encoding="utf-8")
    assert main(["validate", "--config", str(bad)]) == 2
    assert "error: rho: unknown key" in capsys.readouterr().err
    assert main(["validate", "--config", str(tmp_path / "missing.yaml")]) == 2
    assert "cannot read config file" in capsys.readouterr().err


def test_cli_run_success(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["run", "exact-reconstruction", "--seed", "3",
                 "--out", str(out)])
    captured = capsys.readouterr().out
    assert code == 0
    assert "PASS" in captured and "FAIL" not in captured
    assert "report: %s/report.csv" % out in captured
    assert "# seed = 3" in (out / "report.csv").read_text(encoding="utf-8")


def test_cli_run_reports_failures_with_exit_one(tmp_path, capsys):
    config = tmp_path / "strict.yaml"
    config.write_text("experiment: exact-reconstruction\n"
                      "params:\n  tol: 0.0\n", encoding="utf-8")
    out = tmp_path / "strict-run"
    code = main(["run", "exact-reconstruction", "--config", str(config),
                 "--out", str(out)])
    captured = capsys.readouterr().out
    assert code == 1
    assert "FAIL" in captured
    assert "FAIL" in (out / "report.csv").read_text(encoding="utf-8")


def test_cli_run_config_errors_exit_two(tmp_path, capsys):
    assert main(["run", "frobnicate", "--out", str(tmp_path)]) == 2
    assert "unknown experiment" in capsys.readouterr().err
    config = tmp_path / "mismatch.yaml"
    config.write_text("experiment: oversampling\n", encoding="utf-8")
    assert main(["run", "exact-reconstruction", "--config", str(config),
                 "--out", str(tmp_path)]) == 2
    assert "config is for experiment" in capsys.readouterr().err

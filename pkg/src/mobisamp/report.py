"""Experiment reports: metric rows with declared tolerances, CSV emission.

Every metric states its own pass rule (target, tolerance, comparison) so the
report is self-describing; nothing is judged against hidden thresholds.  The
CSV carries provenance as '#' comment lines (config hash, seed, library
versions) but no timestamps, so identical runs produce identical bytes;
wall-clock data goes to a separate run_meta.json sidecar.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

__all__ = ["MetricRow", "ExperimentReport", "write_report_csv",
           "write_run_meta"]

_COMPARISONS = ("rel", "abs", "le", "ge", "gt", "lt", "eq")


def _passes(value: float, target: float, tolerance: float,
            comparison: str) -> bool:
    if comparison == "rel":
        return abs(value - target) <= tolerance * abs(target)
    if comparison == "abs":
        return abs(value - target) <= tolerance
    if comparison == "le":
        return value <= target
    if comparison == "lt":
        return value < target
    if comparison == "ge":
        return value >= target
    if comparison == "gt":
        return value > target
    return value == target


@dataclass(frozen=True)
class MetricRow:
    """One reported quantity and the rule that judges it."""

    name: str
    value: float
    target: float
    tolerance: float
    comparison: str
    method: str = ""
    seeds: int = 0

    def __post_init__(self):
        if self.comparison not in _COMPARISONS:
            raise ValueError("unknown comparison %r (one of %s)"
                             % (self.comparison, ", ".join(_COMPARISONS)))

    @property
    def passed(self) -> bool:
        return _passes(self.value, self.target, self.tolerance,
                       self.comparison)


@dataclass
class ExperimentReport:
    """Append-only collection of metric rows plus run provenance."""

    experiment: str
    config_sha256: str = ""
    seed: int = 0
    trials: int = 0
    metrics: list = field(default_factory=list)
    artifacts: list = field(default_factory=list)

    def add(self, name: str, value: float, target: float, tolerance: float,
            comparison: str, method: str = "", seeds: int = 0) -> MetricRow:
        row = MetricRow(name, float(value), float(target), float(tolerance),
                        comparison, method, seeds)
        self.metrics.append(row)
        return row

    def add_artifact(self, path) -> None:
        self.artifacts.append(str(path))

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.metrics)

    def failures(self) -> list:
        return [row for row in self.metrics if not row.passed]


def _versions_line() -> str:
    import matplotlib
    import numpy
    import scipy

    from . import __version__
    return ("mobisamp %s; numpy %s; scipy %s; matplotlib %s"
            % (__version__, numpy.__version__, scipy.__version__,
               matplotlib.__version__))


def write_report_csv(report: ExperimentReport, path) -> None:
    lines = []
    lines.append("# experiment = %s" % report.experiment)
    lines.append("# config_sha256 = %s" % report.config_sha256)
    lines.append("# seed = %d" % report.seed)
    lines.append("# trials = %d" % report.trials)
    lines.append("# versions = %s" % _versions_line())
    for name in report.artifacts:
        lines.append("# artifact = %s" % name)
    lines.append("name,value,target,tolerance,comparison,method,seeds,passed")
    for row in report.metrics:
        lines.append("%s,%.17g,%.17g,%.17g,%s,%s,%d,%s"
                     % (row.name, row.value, row.target, row.tolerance,
                        row.comparison, row.method, row.seeds,
                        "pass" if row.passed else "FAIL"))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_run_meta(path, started: float, finished: float = None) -> None:
    """Timestamp sidecar; the only output file allowed to vary run-to-run."""
    if finished is None:
        finished = time.time()
    meta = {
        "started_unix": started,
        "finished_unix": finished,
        "elapsed_seconds": finished - started,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")

"""Experiment configuration: YAML schema, validation, defaults.

A config file is a small YAML mapping:

    experiment: noise-variance   # required, one of EXPERIMENT_SPECS
    seed: 0                      # optional, default 0
    trials: 500                  # optional, recipe default otherwise
    output: runs/demo            # optional output directory
    params:                      # optional recipe-specific block
      rho: 3.141592653589793

Validation is strict: unknown keys and type mismatches are rejected with the
offending dotted key path, and booleans never pass for numbers.  The original
text is kept verbatim so runs can echo their exact input.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
import yaml

from .errors import ConfigError

__all__ = ["ExperimentConfig", "EXPERIMENT_SPECS", "parse_config",
           "default_config"]

_PI = float(np.pi)

# Recipe metadata: description, default trial count, parameter schema.
# Schema entries are (type, default) with type one of int, number, str,
# bool, int-list, number-list.
EXPERIMENT_SPECS = {
    "noise-variance": {
        "description": "Closed-form vs quadrature vs Monte-Carlo noise "
                       "variance for flat-band noise over several band "
                       "ratios.",
        "trials": 500,
        "params": {
            "a_values": ("int-list", (3, 5, 7)),
            "rho": ("number", _PI),
            "length": ("number", 9.0),
        },
    },
    "noise-suppression": {
        "description": "Static vs moving-sensor RMS error ratio under "
                       "wideband environmental noise.",
        "trials": 200,
        "params": {
            "a": ("int", 9),
            "rho": ("number", _PI),
            "length": ("number", 9.0),
        },
    },
    "exact-reconstruction": {
        "description": "Noiseless bandlimited field on a Nyquist lattice: "
                       "static and moving schemes recover it exactly.",
        "trials": 1,
        "params": {
            "rho": ("number", 8.5),
            "grid": ("int", 17),
            "tol": ("number", 1e-10),
        },
    },
    "alias-directions": {
        "description": "Undersampled field: motion removes along-track "
                       "aliasing; two orthogonal scans combine to beat "
                       "either alone.",
        "trials": 1,
        "params": {
            "rho": ("number", 8.5),
            "grid": ("int", 17),
            "combine_grid": ("int", 22),
        },
    },
    "oversampling": {
        "description": "White measurement noise: reconstruction variance "
                       "falls as 1/k with the oversampling factor.",
        "trials": 500,
        "params": {
            "factors": ("int-list", (1, 2, 4, 8)),
            "rho": ("number", 8.5),
            "grid": ("int", 17),
            "noise_variance": ("number", 1.0),
        },
    },
    "box-kernel": {
        "description": "Box pre-filter: normalization and variance limits "
                       "for a narrow box, per-harmonic spectrum prediction "
                       "vs the sampled pipeline.",
        "trials": 1,
        "params": {
            "rho": ("number", _PI),
            "band_ratio": ("int", 3),
            "small_factor": ("number", 1e-4),
            "demo_factor": ("number", 0.2),
            "tol": ("number", 1e-3),
        },
    },
    "warped-speed": {
        "description": "Variable-speed paths: warped reconstruction "
                       "distortion stays below the top-speed bound; the "
                       "constant-speed case is exact.",
        "trials": 50,
        "params": {
            "kmax": ("int", 6),
            "margin": ("number", 1.05),
        },
    },
    "path-bandwidth": {
        "description": "Warped-signal band predictions: 99%-energy check "
                       "and the quartic growth of out-of-band power under "
                       "small path perturbations.",
        "trials": 20,
        "params": {
            "energy_target": ("number", 0.99),
            "epsilons": ("number-list", (1e-3, 3e-3, 1e-2)),
        },
    },
    "tv-design": {
        "description": "Moving arrays for time-varying fields: closed-form "
                       "spacing limits vs the geometric overlap checker, "
                       "plus a sample/reconstruct sweep across the limit.",
        "trials": 200,
        "params": {
            "sweep": ("bool", True),
        },
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment request plus the verbatim text it came from."""

    experiment: str
    seed: int = 0
    trials: int = None
    output: str = None
    params: dict = field(default_factory=dict)
    raw_text: str = ""

    @property
    def resolved_trials(self) -> int:
        if self.trials is not None:
            return self.trials
        return EXPERIMENT_SPECS[self.experiment]["trials"]

    def text_sha256(self) -> str:
        return hashlib.sha256(self.raw_text.encode("utf-8")).hexdigest()


def _type_name(value) -> str:
    return type(value).__name__


def _check_scalar(value, kind: str, path: str):
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError("%s: expected an integer, got %s %r"
                              % (path, _type_name(value), value))
        return int(value)
    if kind == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError("%s: expected a number, got %s %r"
                              % (path, _type_name(value), value))
        return float(value)
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError("%s: expected a string, got %s %r"
                              % (path, _type_name(value), value))
        return value
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError("%s: expected a boolean, got %s %r"
                              % (path, _type_name(value), value))
        return value
    raise ConfigError("%s: unsupported schema type %s" % (path, kind))


def _check_value(value, kind: str, path: str):
    if kind.endswith("-list"):
        if not isinstance(value, (list, tuple)):
            raise ConfigError("%s: expected a list, got %s %r"
                              % (path, _type_name(value), value))
        base = kind[:-len("-list")]
        if base == "int":
            base = "int"
        elif base == "number":
            base = "number"
        return tuple(_check_scalar(v, base, "%s[%d]" % (path, i))
                     for i, v in enumerate(value))
    return _check_scalar(value, kind, path)


def _validate_params(block, schema: dict, prefix: str) -> dict:
    if block is None:
        block = {}
    if not isinstance(block, dict):
        raise ConfigError("%s: expected a mapping, got %s"
                          % (prefix, _type_name(block)))
    out = {}
    for key, value in block.items():
        if key not in schema:
            known = ", ".join(sorted(schema)) or "(none)"
            raise ConfigError("%s.%s: unknown key (known keys: %s)"
                              % (prefix, key, known))
        kind, _ = schema[key]
        out[key] = _check_value(value, kind, "%s.%s" % (prefix, key))
    for key, (kind, default) in schema.items():
        out.setdefault(key, default)
    return out


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a YAML experiment config; errors name the key path."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("invalid config syntax: %s" % exc) from exc
    if data is None:
        raise ConfigError("empty config: an 'experiment' key is required")
    if not isinstance(data, dict):
        raise ConfigError("config root: expected a mapping, got %s"
                          % _type_name(data))

    allowed = {"experiment", "seed", "trials", "output", "params"}
    for key in data:
        if key not in allowed:
            raise ConfigError("%s: unknown key (known keys: %s)"
                              % (key, ", ".join(sorted(allowed))))

    if "experiment" not in data:
        raise ConfigError("experiment: missing required key")
    name = _check_scalar(data["experiment"], "str", "experiment")
    if name not in EXPERIMENT_SPECS:
        raise ConfigError("experiment: unknown experiment %r; available: %s"
                          % (name, ", ".join(sorted(EXPERIMENT_SPECS))))

    seed = _check_scalar(data.get("seed", 0), "int", "seed")
    if seed < 0:
        raise ConfigError("seed: must be nonnegative, got %d" % seed)
    trials = data.get("trials")
    if trials is not None:
        trials = _check_scalar(trials, "int", "trials")
        if trials < 1:
            raise ConfigError("trials: must be at least 1, got %d" % trials)
    output = data.get("output")
    if output is not None:
        output = _check_scalar(output, "str", "output")

    params = _validate_params(data.get("params"),
                              EXPERIMENT_SPECS[name]["params"], "params")
    return ExperimentConfig(experiment=name, seed=seed, trials=trials,
                            output=output, params=params, raw_text=text)


def default_config(experiment: str, seed: int = 0) -> ExperimentConfig:
    """Minimal config for a recipe, as if read from a two-line file."""
    if experiment not in EXPERIMENT_SPECS:
        raise ConfigError("experiment: unknown experiment %r; available: %s"
                          % (experiment, ", ".join(sorted(EXPERIMENT_SPECS))))
    text = "experiment: %s\nseed: %d\n" % (experiment, seed)
    return parse_config(text)

"""Strict scenario configuration for the command-line runner."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["ConfigError", "ScenarioConfig", "load_config", "DEFAULTS"]


class ConfigError(ValueError):
    """Malformed configuration; message names the offending key."""


DEFAULTS = {
    "scenario": "default",
    "seed": 12345,
    "figures": True,
    "impurity": {
        "epsilon": 0.0,
        "beta": 0.9,
        "gamma": 1.0,
        "j_coupling": 0.0,
    },
    "bethe": {
        "system_length": 50.0,
        "n_particles": 8,
        "gamma0": 1.0,
        "width_law": "near_critical",
    },
    "sweep": {
        "delta_min": 1e-6,
        "delta_max": 1e-1,
        "n_points": 13,
    },
    "monodromy": {
        "delta0": 1e-2,
        "n_steps": 64,
    },
    "schur": {
        "v0": 1.0,
        "phi": 0.7853981633974483,
        "delta_o": 20.0,
        "bandwidth": 1.0,
        "delta_o_grid": [20.0, 40.0, 80.0, 160.0, 320.0],
        "n_phase_samples": 32,
        "n_bath": 8,
        "bath_coupling": 0.05,
    },
    "algebra": {
        "n_draws": 100,
        "n_spectral": 20,
    },
    "tolerances": {
        "algebra_small": 1e-11,     # residuals on dimensions <= 8
        "algebra_large": 1e-10,
        "universality": 1e-13,
        "charges": 1e-9,
        "bethe_residual": 1e-12,
        "spectator_return": 1e-8,
        "conjugation": 1e-10,
        "quantum_number_imag": 1e-8,
        "schur_coefficients": 1e-10,
        "schur_hermitian": 1e-12,
        "pt_covariance": 1e-12,
        "jordan_similarity": 1e-10,
    },
}


@dataclass(frozen=True)
class ScenarioConfig:
    data: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.data[key]

    def section(self, key) -> dict:
        return dict(self.data[key])

    def canonical_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _merge_strict(defaults, user, path=""):
    if not isinstance(user, dict):
        raise ConfigError(f"section {path or '<root>'} must be an object")
    out = {}
    for key, base in defaults.items():
        if key in user:
            val = user[key]
            if isinstance(base, dict):
                out[key] = _merge_strict(base, val, f"{path}{key}.")
            else:
                out[key] = _coerce(base, val, f"{path}{key}")
        else:
            out[key] = base if not isinstance(base, dict) else dict(base)
    unknown = set(user) - set(defaults)
    if unknown:
        raise ConfigError(
            f"unknown configuration key(s): "
            f"{', '.join(sorted(path + k for k in unknown))}")
    return out


def _coerce(base, val, path):
    if isinstance(base, bool):
        if not isinstance(val, bool):
            raise ConfigError(f"{path} must be a boolean")
        return val
    if isinstance(base, int) and not isinstance(base, bool):
        if not isinstance(val, (int, float)) or int(val) != val:
            raise ConfigError(f"{path} must be an integer")
        return int(val)
    if isinstance(base, float):
        if not isinstance(val, (int, float)):
            raise ConfigError(f"{path} must be a number")
        return float(val)
    if isinstance(base, str):
        if not isinstance(val, str):
            raise ConfigError(f"{path} must be a string")
        return val
    if isinstance(base, list):
        if not isinstance(val, list) or not val:
            raise ConfigError(f"{path} must be a non-empty list")
        return [float(x) for x in val]
    raise ConfigError(f"{path}: unsupported value type")


def _validate(data):
    for name, val in data["tolerances"].items():
        if val <= 0:
            raise ConfigError(f"tolerances.{name} must be positive")
    sw = data["sweep"]
    if not (0 < sw["delta_min"] < sw["delta_max"]):
        raise ConfigError("sweep.delta_min/delta_max must be ordered positive")
    if sw["n_points"] < 4:
        raise ConfigError("sweep.n_points must be at least 4")
    if data["monodromy"]["n_steps"] < 64:
        raise ConfigError("monodromy.n_steps must be at least 64")
    if data["algebra"]["n_draws"] < 1 or data["algebra"]["n_spectral"] < 1:
        raise ConfigError("algebra draw counts must be positive")


def load_config(path=None, seed=None, tol=None) -> ScenarioConfig:
    """Merge a JSON file over the defaults; unknown keys are rejected."""
    user = {}
    if path is not None:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    data = _merge_strict(DEFAULTS, user)
    if seed is not None:
        data["seed"] = int(seed)
    if tol is not None:
        if tol <= 0:
            raise ConfigError("--tol must be positive")
        for key in data["tolerances"]:
            data["tolerances"][key] = float(tol)
    _validate(data)
    return ScenarioConfig(data=data)


def sweep_grid(cfg: ScenarioConfig) -> np.ndarray:
    sw = cfg.section("sweep")
    return np.logspace(np.log10(sw["delta_min"]), np.log10(sw["delta_max"]),
                       sw["n_points"])

"""Run configuration: one versioned defaults table plus JSON overrides."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .charpoly import PolyParams, solve_kernel_roots, spectral_gap_mu0
from .errors import InvalidConfig

DEFAULTS = {
    "version": 1,
    "c": 10.0,
    "D": 1.0,
    "beta": 1.0,
    "alpha": 1.0,
    "tau": 0.0,
    "K": 1.0,
    "mu": None,  # half the spectral gap when unset
    "grid": {"L": 100.0, "h": 0.01},
    "iteration": {"tol_fixed": 1e-8, "tol_residual": 1e-3, "max_iter": 500},
    "pde": {"dt": 1e-3, "dx": 0.01, "T": 20.0, "X": None},  # X unset: max(2L, cT + L)
    "seed": 0,
}


def _merge(base: dict, over: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, val in over.items():
        if key not in base:
            raise InvalidConfig(f"unknown config key {path + key!r}")
        if isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise InvalidConfig(f"{path + key!r} must be an object")
            out[key] = _merge(base[key], val, path + key + ".")
        else:
            out[key] = val
    return out


@dataclass(frozen=True)
class RunConfig:
    data: dict

    def __getitem__(self, key):
        return self.data[key]

    @property
    def r(self) -> float:
        return self.data["c"] * self.data["tau"]

    def to_dict(self) -> dict:
        return copy.deepcopy(self.data)


def resolve_mu(data: dict) -> float:
    roots = solve_kernel_roots(PolyParams(data["c"], data["D"], data["beta"]))
    mu0 = spectral_gap_mu0(roots)
    gamma = min(-roots.lambda2, roots.lambda3)
    mu = data["mu"]
    if mu is None:
        return 0.5 * mu0
    if not 0 < mu < min(mu0, gamma):
        raise InvalidConfig(f"mu={mu} must lie in (0, {min(mu0, gamma)})")
    return float(mu)


def build_config(overrides: dict | None = None) -> RunConfig:
    data = _merge(DEFAULTS, overrides or {})
    for key in ("c", "D", "beta"):
        if not (isinstance(data[key], (int, float)) and data[key] > 0):
            raise InvalidConfig(f"{key} must be a positive number")
    if data["alpha"] != 1.0 or data["K"] != 1.0:
        raise InvalidConfig("alpha and K are fixed to 1")
    if data["tau"] < 0:
        raise InvalidConfig("tau must be nonnegative")
    g = data["grid"]
    if g["L"] <= 0 or g["h"] <= 0:
        raise InvalidConfig("grid L and h must be positive")
    it = data["iteration"]
    if it["tol_fixed"] <= 0 or it["tol_residual"] <= 0 or int(it["max_iter"]) < 1:
        raise InvalidConfig("iteration tolerances must be positive and max_iter >= 1")
    pde = data["pde"]
    if pde["X"] is None:
        pde["X"] = max(2.0 * g["L"], data["c"] * pde["T"] + g["L"])
    return RunConfig(data)


def load_config(path=None, extra: dict | None = None) -> RunConfig:
    over = {}
    if path is not None:
        try:
            over = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
        if not isinstance(over, dict):
            raise InvalidConfig("config must be a JSON object")
    for key, val in (extra or {}).items():
        node = over
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = val
    return build_config(over)


def dumps(obj) -> str:
    """Stable JSON: sorted keys, non-finite numbers as strings."""
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return repr(v)
        if isinstance(v, dict):
            return {str(k): clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        return v
    return json.dumps(clean(obj), sort_keys=True, indent=2) + "\n"

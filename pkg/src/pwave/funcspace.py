"""Grid functions on ``[-L, L]`` with declared behaviour outside the grid."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import GridMismatch, GridTooSmall

GAMMA_MONO_TOL = 1e-6
GAMMA_END_TOL = 1e-4


@dataclass(frozen=True)
class Grid:
    L: float
    h: float

    def __post_init__(self):
        if not (self.L > 0 and self.h > 0):
            raise ValueError("L and h must be positive")

    @property
    def n(self) -> int:
        return 2 * int(round(self.L / self.h)) + 1

    @property
    def x(self) -> np.ndarray:
        m = (self.n - 1) // 2
        return np.arange(-m, m + 1) * self.h


@dataclass(frozen=True)
class TailModel:
    """Left extension ``amplitude * exp(rate * (s + L))`` for ``s < -L``."""

    amplitude: float
    rate: float = 0.0


@dataclass(frozen=True, eq=False)
class Profile:
    grid: Grid
    values: np.ndarray
    left_state: float = 0.0
    right_state: float = 1.0
    tail: TailModel | None = field(default=None)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise GridMismatch(f"{v.shape[0] if v.ndim else 0} values for a grid of {self.grid.n} points")
        object.__setattr__(self, "values", v)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def left_tail(self) -> TailModel:
        return self.tail if self.tail is not None else TailModel(self.left_state, 0.0)

    def with_values(self, values) -> "Profile":
        return replace(self, values=np.asarray(values, dtype=float))

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "Profile":
        return cls(grid, np.full(grid.n, float(value)), float(value), float(value))


@dataclass(frozen=True)
class WeightedNorm:
    mu: float

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")


def _same_grid(p: Profile, q: Profile):
    if p.grid != q.grid:
        raise GridMismatch(f"{p.grid} vs {q.grid}")


def sup_norm(p: Profile) -> float:
    return float(np.max(np.abs(p.values)))


def weighted_norm(p: Profile, w: WeightedNorm) -> float:
    """Grid maximum of ``e^{-mu|x|}|p|`` combined with the bound on the tails."""
    x = p.x
    inner = float(np.max(np.exp(-w.mu * np.abs(x)) * np.abs(p.values)))
    edge = max(abs(p.left_tail.amplitude), abs(p.right_state)) * math.exp(-w.mu * p.grid.L)
    return max(inner, edge)


def weighted_diff_norm(p: Profile, q: Profile, w: WeightedNorm) -> float:
    """Weighted norm of ``p - q``; tails contribute their amplitude gap at the edges."""
    _same_grid(p, q)
    inner = float(np.max(np.exp(-w.mu * np.abs(p.x)) * np.abs(p.values - q.values)))
    edge = max(abs(p.left_tail.amplitude - q.left_tail.amplitude), abs(p.right_state - q.right_state))
    return max(inner, edge * math.exp(-w.mu * p.grid.L))


def pointwise_order(p: Profile, q: Profile, tol: float = 0.0) -> str:
    """One of ``'equal'``, ``'leq'``, ``'geq'``, ``'incomparable'`` (relation of p to q)."""
    _same_grid(p, q)
    d = p.values - q.values
    lo, hi = float(np.min(d)), float(np.max(d))
    if lo >= -tol and hi <= tol:
        return "equal"
    if hi <= tol:
        return "leq"
    if lo >= -tol:
        return "geq"
    return "incomparable"


def is_in_gamma(p: Profile, tol: float | None = None, K: float = 1.0):
    """Nondecreasing with ends near 0 and K. Returns ``(ok, diagnostics)``."""
    mono_tol = GAMMA_MONO_TOL if tol is None else tol
    end_tol = GAMMA_END_TOL if tol is None else tol
    v = p.values
    worst_drop = float(max(0.0, -np.min(np.diff(v)))) if v.size > 1 else 0.0
    left_gap = abs(float(v[0]))
    right_gap = abs(float(v[-1]) - K)
    ok = worst_drop <= mono_tol and left_gap <= end_tol and right_gap <= end_tol
    return ok, {"worst_drop": worst_drop, "left_gap": left_gap, "right_gap": right_gap}


def sample_at(p: Profile, xi):
    """Linear interpolation inside the grid; the tail model and right state outside."""
    xi = np.asarray(xi, dtype=float)
    L = p.grid.L
    tail = p.left_tail
    inside = np.interp(xi, p.x, p.values)
    left = tail.amplitude * np.exp(tail.rate * np.minimum(xi + L, 0.0))
    out = np.where(xi < -L, left, np.where(xi > L, p.right_state, inside))
    return out if out.ndim else float(out)


_CENTRAL = {
    1: (np.array([1, -8, 0, 8, -1]) / 12.0, 2),
    2: (np.array([-1, 16, -30, 16, -1]) / 12.0, 2),
    3: (np.array([1, -8, 13, 0, -13, 8, -1]) / 8.0, 3),
}
# forward one-sided, second order, starting at the evaluation point
_FORWARD = {
    1: np.array([-3, 4, -1]) / 2.0,
    2: np.array([2, -5, 4, -1]) / 1.0,
    3: np.array([-5, 18, -24, 14, -3]) / 2.0,
}


def finite_diff(p: Profile, order: int) -> Profile:
    """Derivative of the given order: 4th-order central, 2nd-order one-sided at the 3 edge points."""
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    v = p.values
    n = v.size
    if n < 7:
        raise GridTooSmall(f"{n} points; at least 7 needed")
    h = p.grid.h
    w, half = _CENTRAL[order]
    out = np.empty(n)
    # weights apply to v[i-half .. i+half]
    out[half:n - half] = np.correlate(v, w, mode="valid")
    fw = _FORWARD[order]
    m = fw.size
    for i in range(3):
        out[i] = np.dot(fw, v[i:i + m])
        out[n - 1 - i] = (-1) ** order * np.dot(fw, v[n - 1 - i::-1][:m])
    out /= h**order
    return Profile(p.grid, out, 0.0, 0.0)


def write_csv(p: Profile, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["xi", "value"])
        for xi, v in zip(p.x, p.values):
            wr.writerow([repr(float(xi)), repr(float(v))])


def profile_metadata(p: Profile, mu: float | None = None) -> dict:
    meta = {
        "grid": {"L": p.grid.L, "h": p.grid.h, "n": p.grid.n},
        "left_state": p.left_state,
        "right_state": p.right_state,
        "tail": None if p.tail is None else {"amplitude": p.tail.amplitude, "rate": p.tail.rate},
        "sup_norm": sup_norm(p),
    }
    if mu is not None:
        meta["weighted_norm"] = {"mu": mu, "value": weighted_norm(p, WeightedNorm(mu))}
    return meta


def write_json(p: Profile, path, mu: float | None = None) -> None:
    Path(path).write_text(json.dumps(profile_metadata(p, mu), sort_keys=True, indent=2) + "\n")


def read_profile(csv_path, json_path=None) -> Profile:
    """Load a profile CSV; grid, states and tail come from the JSON sidecar when present."""
    csv_path = Path(csv_path)
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    xs, vals = data[:, 0], data[:, 1]
    if json_path is None:
        cand = csv_path.with_suffix(".json")
        json_path = cand if cand.exists() else None
    if json_path is not None:
        meta = json.loads(Path(json_path).read_text())
        grid = Grid(meta["grid"]["L"], meta["grid"]["h"])
        tail = meta.get("tail")
        return Profile(
            grid, vals, meta["left_state"], meta["right_state"],
            None if tail is None else TailModel(tail["amplitude"], tail["rate"]),
        )
    h = float(xs[1] - xs[0])
    return Profile(Grid(float(xs[-1]), h), vals, 0.0, 1.0)

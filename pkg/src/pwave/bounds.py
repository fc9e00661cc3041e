"""Explicit upper and lower solutions for the delayed logistic wave, and their checks.

Upper: ``e^{eta1 x}/2`` for ``x < 0`` and ``1 - e^{-eta1 x}/2`` for ``x >= 0``.
Lower: ``(1 - q e^{eps x}) e^{eta1 x}/2`` for ``x < x1`` and the constant ``d1`` after.
Both inequalities are checked with exact derivatives of these formulas.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .charpoly import (
    DelayedCharParams,
    PositiveRootPair,
    check_epsilon_window,
    eval_delta_r,
    solve_delayed_positive_roots,
)
from .errors import BaseCaseFails, InvalidEpsilon, InvalidPlateau, WaveError
from .funcspace import Grid, Profile, TailModel

SUPER_TOL = 1e-10
SUB_TOL = 1e-10
Q_MARGIN = 0.1


@dataclass(frozen=True)
class SuperSolutionParams:
    eta1: float

    def __post_init__(self):
        if self.eta1 <= 0:
            raise ValueError("eta1 must be positive")


@dataclass(frozen=True)
class SubSolutionParams:
    eta1: float
    eta2: float
    eps: float
    q: float
    xi1: float

    @property
    def d1(self) -> float:
        return 0.5 * (1.0 - self.q * math.exp(self.eps * self.xi1)) * math.exp(self.eta1 * self.xi1)


def q_lower_bound(params: DelayedCharParams, eta1: float, eps: float) -> float:
    d0 = float(eval_delta_r(DelayedCharParams(params.c, params.D, 0.0), eta1 + eps))
    return max(1.0, -1.0 / (2.0 * d0)) if d0 < 0 else math.inf


def validate_sub_params(sp: SubSolutionParams, params: DelayedCharParams) -> None:
    if sp.eps <= 0 or sp.eta1 + sp.eps >= sp.eta2:
        raise InvalidEpsilon(f"eps={sp.eps} outside (0, {sp.eta2 - sp.eta1})")
    bound = q_lower_bound(params, sp.eta1, sp.eps)
    if sp.q < bound:
        raise ValueError(f"q={sp.q} below the required bound {bound}")
    if sp.xi1 >= 0:
        raise InvalidPlateau(f"xi1={sp.xi1} must be negative")
    d1 = sp.d1
    if not 0.0 < d1 < 1.0:
        raise InvalidPlateau(f"plateau d1={d1} outside (0, 1)")


def default_eps(pair: PositiveRootPair) -> float:
    """Half the root window, capped at eta1/2 so the linear margin beats the quadratic term at -inf."""
    return min(0.5 * (pair.eta2 - pair.eta1), 0.5 * pair.eta1)


def default_sub_params(pair: PositiveRootPair, params: DelayedCharParams, eps: float | None = None,
                       margin: float = Q_MARGIN) -> SubSolutionParams:
    eps = default_eps(pair) if eps is None else eps
    if not check_epsilon_window(params, pair.eta1, pair.eta2, eps):
        raise InvalidEpsilon(f"Delta_r(eta1 + eps) >= 0 for eps={eps}")
    q = q_lower_bound(params, pair.eta1, eps) + margin
    xi1 = math.log(pair.eta1 / (q * (pair.eta1 + eps))) / eps
    sp = SubSolutionParams(pair.eta1, pair.eta2, eps, q, xi1)
    validate_sub_params(sp, params)
    return sp


# closed forms and derivatives -------------------------------------------------

def super_values(sp: SuperSolutionParams, x, deriv: int = 0, side: str = "right"):
    """k-th derivative of the upper solution; ``side`` picks the branch at 0."""
    x = np.asarray(x, dtype=float)
    e = sp.eta1
    left = (x < 0) | ((x == 0) & (side == "left"))
    lv = 0.5 * e**deriv * np.exp(e * np.minimum(x, 0.0))
    rv = -0.5 * (-e) ** deriv * np.exp(-e * np.maximum(x, 0.0))
    if deriv == 0:
        rv = 1.0 + rv
    return np.where(left, lv, rv)


def sub_values(sp: SubSolutionParams, x, deriv: int = 0, side: str = "right"):
    x = np.asarray(x, dtype=float)
    e, a = sp.eta1, sp.eta1 + sp.eps
    left = (x < sp.xi1) | ((x == sp.xi1) & (side == "left"))
    xm = np.minimum(x, sp.xi1)
    lv = 0.5 * e**deriv * np.exp(e * xm) - 0.5 * sp.q * a**deriv * np.exp(a * xm)
    rv = sp.d1 if deriv == 0 else 0.0
    return np.where(left, lv, rv)


def build_supersolution(sp: SuperSolutionParams, grid: Grid) -> Profile:
    x = grid.x
    amp = 0.5 * math.exp(-sp.eta1 * grid.L)
    return Profile(grid, super_values(sp, x), 0.0, 1.0, TailModel(amp, sp.eta1))


def build_subsolution(sp: SubSolutionParams, grid: Grid) -> Profile:
    d1 = sp.d1
    if not 0.0 < d1 < 1.0:
        raise InvalidPlateau(f"plateau d1={d1} outside (0, 1)")
    x = grid.x
    amp = float(sub_values(sp, -grid.L)) if -grid.L < sp.xi1 else d1
    # the e^{eta1} extension sits below the true left branch, which is the safe side for a lower bound
    return Profile(grid, sub_values(sp, x), 0.0, d1, TailModel(amp, sp.eta1))


def _lhs(fun, c, D, r, x, side):
    d1, d2, d3 = (fun(x, k, side) for k in (1, 2, 3))
    now = fun(x, 0, side)
    delayed = fun(x - r, 0, "right" if r > 0 else side)
    return c * d3 + D * d2 - c * d1 + delayed * (1.0 - now)


@dataclass
class BoundReport:
    kind: str
    extreme: float
    passed: bool
    cases: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def super_lhs(sp: SuperSolutionParams, c: float, D: float, r: float, x, side="right"):
    return _lhs(lambda z, k, s: super_values(sp, z, k, s), c, D, r, np.asarray(x, dtype=float), side)


def sub_lhs(sp: SubSolutionParams, c: float, D: float, r: float, x, side="right"):
    return _lhs(lambda z, k, s: sub_values(sp, z, k, s), c, D, r, np.asarray(x, dtype=float), side)


def verify_supersolution(sp: SuperSolutionParams, grid: Grid, c: float, D: float, r: float) -> BoundReport:
    """Max of ``c u''' + D u'' - c u' + u(x-r)(1-u(x))`` per case; pass iff <= 1e-10."""
    x = grid.x
    lhs_r = super_lhs(sp, c, D, r, x, "right")
    lhs_l = super_lhs(sp, c, D, r, x, "left")
    lhs = np.where(x == 0, np.maximum(lhs_l, lhs_r), lhs_r)
    masks = [x <= 0, (x >= 0) & (x < r), x >= r]
    # at x = 0 the left case uses the left branch, the others the right branch
    case_vals = [np.where(x == 0, lhs_l, lhs), lhs_r, lhs_r]
    cases = {}
    for name, m, v in zip(("x<0", "0<=x<r", "x>=r"), masks, case_vals):
        cases[name] = float(np.max(v[m])) if np.any(m) else None
    extreme = float(np.max(lhs))
    return BoundReport("super", extreme, extreme <= SUPER_TOL, cases)


def verify_subsolution(sp: SubSolutionParams, grid: Grid, c: float, D: float, r: float) -> BoundReport:
    """Min of the same expression for the lower solution; pass iff >= -1e-10."""
    x = grid.x
    lhs_r = sub_lhs(sp, c, D, r, x, "right")
    lhs_l = sub_lhs(sp, c, D, r, x, "left")
    at = x == sp.xi1
    lhs = np.where(at, np.minimum(lhs_l, lhs_r), lhs_r)
    masks = [x <= sp.xi1, (x >= sp.xi1) & (x < sp.xi1 + r), x >= sp.xi1 + r]
    case_vals = [np.where(at, lhs_l, lhs), lhs_r, lhs_r]
    cases = {}
    for name, m, v in zip(("x<x1", "x1<=x<x1+r", "x>=x1+r"), masks, case_vals):
        cases[name] = float(np.min(v[m])) if np.any(m) else None
    extreme = float(np.min(lhs))
    return BoundReport("sub", extreme, extreme >= -SUB_TOL, cases)


@dataclass
class BoundsBundle:
    r: float
    pair: PositiveRootPair
    sup_params: SuperSolutionParams
    sub_params: SubSolutionParams
    super_report: BoundReport
    sub_report: BoundReport

    @property
    def passed(self) -> bool:
        return self.super_report.passed and self.sub_report.passed

    def to_dict(self):
        sp = self.sub_params
        return {
            "r": self.r,
            "eta1": self.pair.eta1,
            "eta2": self.pair.eta2,
            "sub_params": {"eps": sp.eps, "q": sp.q, "xi1": sp.xi1, "d1": sp.d1},
            "super": self.super_report.to_dict(),
            "sub": self.sub_report.to_dict(),
            "passed": self.passed,
        }


def construct_bounds(c: float, D: float, r: float, grid: Grid) -> BoundsBundle:
    params = DelayedCharParams(c, D, r)
    pair = solve_delayed_positive_roots(params)
    sup = SuperSolutionParams(pair.eta1)
    sub = default_sub_params(pair, params)
    return BoundsBundle(
        r, pair, sup, sub,
        verify_supersolution(sup, grid, c, D, r),
        verify_subsolution(sub, grid, c, D, r),
    )


@dataclass
class DelayScan:
    r_star: float
    records: list
    nonmonotone: bool

    def to_dict(self):
        return {"r_star": self.r_star, "nonmonotone": self.nonmonotone, "records": self.records}


def find_max_delay(c: float, D: float, grid: Grid, resolution: float = 1e-3, r_cap: float = 50.0) -> DelayScan:
    """Largest multiple of ``resolution`` where both bounds verify (doubling, then bisection)."""
    records: dict[int, dict] = {}

    def ok(k: int) -> bool:
        if k not in records:
            r = k * resolution
            try:
                b = construct_bounds(c, D, r, grid)
                records[k] = {
                    "r": r, "eta1": b.pair.eta1, "eta2": b.pair.eta2,
                    "super_max": b.super_report.extreme, "sub_min": b.sub_report.extreme,
                    "passed": b.passed,
                }
            except WaveError as exc:
                records[k] = {"r": r, "passed": False, "error": type(exc).__name__}
        return records[k]["passed"]

    if not ok(0):
        why = records[0].get("error", "verification failed")
        raise BaseCaseFails(f"r=0 bounds do not verify for c={c}, D={D}: {why}")
    k_cap = int(round(r_cap / resolution))
    lo, hi = 0, 1
    while hi <= k_cap and ok(hi):
        lo, hi = hi, hi * 2
    hi = min(hi, k_cap + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    ordered = [records[k] for k in sorted(records)]
    passed_ks = [k for k in sorted(records) if records[k]["passed"]]
    failed_ks = [k for k in sorted(records) if not records[k]["passed"]]
    nonmono = bool(failed_ks and passed_ks and min(failed_ks) < max(passed_ks))
    return DelayScan(lo * resolution, ordered, nonmono)

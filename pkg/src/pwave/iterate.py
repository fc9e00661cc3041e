"""Monotone fixed-point iteration between an upper and a lower solution."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .charpoly import PolyParams
from .errors import MaxIterExceeded, OrderingViolated
from .funcspace import Profile, WeightedNorm, is_in_gamma, pointwise_order, weighted_diff_norm
from .greenkernel import GreenKernel
from .waveop import HOperator, Reaction, apply_F, apply_reaction, residual

ORDER_TOL = 1e-8


@dataclass(frozen=True)
class IterationConfig:
    tol_fixed: float = 1e-8
    tol_residual: float = 1e-3
    max_iter: int = 500
    mu: float = 0.05

    def __post_init__(self):
        if self.tol_fixed <= 0 or self.tol_residual <= 0 or self.mu <= 0:
            raise ValueError("tolerances and mu must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class IterationRecord:
    n: int
    sup_gap: float
    weighted_gap: float
    margin_lower: float
    margin_upper: float
    residual: float


@dataclass
class IterationTrace:
    records: list = field(default_factory=list)
    converged: bool = False
    classification: str | None = None
    plateau: float | None = None

    @property
    def iterations(self) -> int:
        return len(self.records)

    def rows(self):
        return [asdict(r) for r in self.records]


def monotone_iterate(
    kernel: GreenKernel,
    hop: HOperator,
    upper: Profile,
    lower: Profile,
    cfg: IterationConfig = IterationConfig(),
    waive_checks: bool = False,
    ascending: bool = False,
):
    """Iterate ``p <- F(p)`` from ``upper`` (or from ``lower`` when ``ascending``).

    Every step asserts the chain ``lower <= p_{n+1} <= p_n <= upper`` to 1e-8
    (reversed when ascending). Both start points carry the upper solution's left
    extension, which fixes the translation of the limit.
    Returns ``(profile, trace)``.
    """
    if not waive_checks:
        ok, diag = is_in_gamma(upper, K=hop.reaction.K)
        if not ok:
            raise ValueError(f"upper bound is not a front from 0 to K: {diag}")
        rel = pointwise_order(lower, upper, ORDER_TOL)
        if rel not in ("leq", "equal"):
            raise ValueError(f"lower bound is not below the upper bound ({rel})")
    params = PolyParams(kernel.c, kernel.D, kernel.beta)
    w = WeightedNorm(cfg.mu)
    cur = upper if not ascending else replace(lower, tail=upper.tail, right_state=hop.reaction.K)
    trace = IterationTrace()
    for n in range(1, cfg.max_iter + 1):
        nxt = apply_F(kernel, hop, cur)
        step = nxt.values - cur.values
        if not ascending and float(np.max(step)) > ORDER_TOL:
            raise OrderingViolated(f"iterate {n} rose above its predecessor by {np.max(step):.3e}")
        if ascending and float(np.min(step)) < -ORDER_TOL:
            raise OrderingViolated(f"iterate {n} fell below its predecessor by {-np.min(step):.3e}")
        m_lo = float(np.min(nxt.values - lower.values))
        m_up = float(np.max(nxt.values - upper.values))
        if m_lo < -ORDER_TOL:
            raise OrderingViolated(f"iterate {n} dipped below the lower bound by {-m_lo:.3e}")
        if m_up > ORDER_TOL:
            raise OrderingViolated(f"iterate {n} rose above the upper bound by {m_up:.3e}")
        gap = float(np.max(np.abs(step)))
        res = residual(params, hop.reaction, nxt).interior
        trace.records.append(
            IterationRecord(n, gap, weighted_diff_norm(nxt, cur, w), m_lo, m_up, res)
        )
        cur = nxt
        if gap < cfg.tol_fixed and res <= cfg.tol_residual:
            trace.converged = True
            break
    kind, k = classify_limit(cur, hop.reaction)
    trace.classification, trace.plateau = kind, k
    if not trace.converged:
        raise MaxIterExceeded(
            f"no convergence in {cfg.max_iter} iterations (last gap {trace.records[-1].sup_gap:.3e})",
            cur, trace,
        )
    return cur, trace


def check_fixed_point(kernel: GreenKernel, hop: HOperator, p: Profile) -> float:
    return float(np.max(np.abs(apply_F(kernel, hop, p).values - p.values)))


def classify_limit(p: Profile, re: Reaction, tol: float = 1e-4):
    """``('connects_0_to_K', k)``, ``('intermediate', k)`` or ``('degenerate', k)``."""
    k = float(p.values[-1])
    if abs(k - re.K) <= tol and abs(float(p.values[0])) <= tol:
        return "connects_0_to_K", k
    if abs(float(apply_reaction(re, k, k))) > tol:
        return "intermediate", k
    return "degenerate", k


def _quotients(v, h, step):
    w = v[::step]
    hh = h * step
    d1 = np.diff(w) / hh
    d2 = np.diff(w, 2) / hh**2
    return w, d1, d2


def smoothness_probe(p: Profile, kink: float = 0.0) -> dict:
    """Difference-quotient diagnostics at spacings h, 2h, 4h.

    Reports the sup of the first and second quotients per scale, the spread of
    the second quotient across the two sides of ``kink`` per scale, and the
    size of both quotients at the domain ends.
    """
    h = p.grid.h
    x = p.x
    idx0 = int(np.argmin(np.abs(x - kink)))
    out = {"scales": [], "kink": kink}
    for step in (1, 2, 4):
        _, d1, d2 = _quotients(p.values, h, step)
        i = idx0 // step
        # second quotient centred one cell left and right of the kink
        left = float(d2[i - 2]) if i - 2 >= 0 else float("nan")
        right = float(d2[i]) if i < d2.size else float("nan")
        out["scales"].append({
            "spacing": h * step,
            "max_d1": float(np.max(np.abs(d1))),
            "max_d2": float(np.max(np.abs(d2))),
            "d1_at_kink": float(d1[i]) if i < d1.size else float("nan"),
            "d2_jump_at_kink": abs(right - left),
        })
    jumps = [s["d2_jump_at_kink"] for s in out["scales"]]
    d1k = [s["d1_at_kink"] for s in out["scales"]]
    sup1 = [s["max_d1"] for s in out["scales"]]
    sup2 = [s["max_d2"] for s in out["scales"]]
    out["bounded"] = bool(max(sup1) <= 2 * min(sup1) + 1e-12 and max(sup2) <= 2 * min(sup2) + 1e-12)
    # a C^2 profile has second-quotient jumps that shrink with the spacing
    out["d2_jump_shrinks"] = bool(jumps[0] <= jumps[1] <= jumps[2] and jumps[0] < 0.75 * jumps[2] + 1e-12)
    out["d1_consistent"] = bool(max(d1k) - min(d1k) <= 10 * h * max(1.0, max(sup2)))
    _, d1, d2 = _quotients(p.values, h, 1)
    ends = max(abs(d1[0]), abs(d1[-1]), abs(d2[0]), abs(d2[-1]))
    out["end_derivatives"] = float(ends)
    out["ends_flat"] = bool(ends < 1e-4)
    return out

"""Characteristic functions of the linearized profile equation and their roots.

Two families are handled:

* the kernel cubic ``Delta(l) = c l^3 + D l^2 - c l - beta`` whose roots
  build the Green's function of the shifted linear operator;
* the application characteristic ``Delta_r(l) = c l^3 + D l^2 - c l + exp(-l r)``
  whose two positive roots set the exponential rates of the bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DistinctRealRootsRequired, InvalidEpsilon, NoPositivePair

SCAN_STEP = 1e-3
DISC_RTOL = 1e-9


@dataclass(frozen=True)
class PolyParams:
    c: float
    D: float
    beta: float
    alpha: float = 1.0

    def __post_init__(self):
        if not (self.c > 0 and self.D > 0 and self.beta > 0):
            raise ValueError("c, D and beta must be positive")
        if self.alpha != 1.0:
            raise ValueError("alpha is fixed to 1")


@dataclass(frozen=True)
class RootTriple:
    lambda1: float
    lambda2: float
    lambda3: float

    def as_tuple(self):
        return (self.lambda1, self.lambda2, self.lambda3)


@dataclass(frozen=True)
class DelayedCharParams:
    c: float
    D: float
    r: float = 0.0

    def __post_init__(self):
        if not (self.c > 0 and self.D > 0 and self.r >= 0):
            raise ValueError("need c > 0, D > 0, r >= 0")


@dataclass(frozen=True)
class PositiveRootPair:
    eta1: float
    eta2: float

    def __post_init__(self):
        if not 0 < self.eta1 < self.eta2:
            raise ValueError("need 0 < eta1 < eta2")


def eval_delta(params: PolyParams, lam):
    """Kernel characteristic; accepts real or complex scalars and arrays."""
    c, D, b = params.c, params.D, params.beta
    return ((c * lam + D) * lam - c) * lam - b


def _d_delta(params: PolyParams, lam):
    return (3 * params.c * lam + 2 * params.D) * lam - params.c


def cubic_discriminant(a, b, c, d):
    """Discriminant of ``a x^3 + b x^2 + c x + d`` plus the magnitude of its terms."""
    terms = (18 * a * b * c * d, -4 * b**3 * d, b * b * c * c, -4 * a * c**3, -27 * a * a * d * d)
    return math.fsum(terms), sum(abs(t) for t in terms)


def solve_kernel_roots(params: PolyParams) -> RootTriple:
    c, D, b = params.c, params.D, params.beta
    disc, scale = cubic_discriminant(c, D, -c, -b)
    if disc <= DISC_RTOL * scale:
        raise DistinctRealRootsRequired(
            f"cubic {c}l^3+{D}l^2-{c}l-{b} has discriminant {disc:.3e}; three distinct real roots needed"
        )
    # monic form l^3 + B l^2 + C l + E, depressed by l = t - B/3
    B, C, E = D / c, -1.0, -b / c
    p = C - B * B / 3
    q = 2 * B**3 / 27 - B * C / 3 + E
    m = 2 * math.sqrt(-p / 3)
    arg = max(-1.0, min(1.0, 3 * q / (p * m)))
    theta = math.acos(arg) / 3
    roots = [m * math.cos(theta - 2 * math.pi * k / 3) - B / 3 for k in range(3)]
    tol = 1e-12 * max(1.0, c, D, b)
    polished = []
    for lam in roots:
        for _ in range(8):
            f = eval_delta(params, lam)
            if abs(f) <= 1e-3 * tol:
                break
            lam -= f / _d_delta(params, lam)
        polished.append(lam)
    l1, l2, l3 = sorted(polished)
    if not (l1 < l2 < 0 < l3):
        raise DistinctRealRootsRequired(f"unexpected root pattern {l1}, {l2}, {l3}")
    return RootTriple(l1, l2, l3)


def spectral_gap_mu0(roots: RootTriple) -> float:
    return min(roots.lambda3, -roots.lambda2, -roots.lambda1)


def vieta_residuals(params: PolyParams, roots: RootTriple) -> dict:
    l1, l2, l3 = roots.as_tuple()
    return {
        "sum": abs(l1 + l2 + l3 + params.D / params.c),
        "pair": abs(l1 * l2 + l1 * l3 + l2 * l3 + 1.0),
        "product": abs(l1 * l2 * l3 - params.beta / params.c),
    }


def eval_delta_r(params: DelayedCharParams, lam):
    c, D, r = params.c, params.D, params.r
    return ((c * lam + D) * lam - c) * lam + np.exp(-lam * r)


def scan_bound(params: DelayedCharParams) -> float:
    return 1.0 + params.D / params.c + 1.0 / params.c


def solve_delayed_positive_roots(params: DelayedCharParams) -> PositiveRootPair:
    """Bracket sign changes of Delta_r on (0, bound] and refine each one."""
    lam_max = scan_bound(params)
    grid = np.arange(1, int(math.ceil(lam_max / SCAN_STEP)) + 1) * SCAN_STEP
    vals = eval_delta_r(params, grid)
    idx = np.flatnonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))
    if len(idx) < 2:
        raise NoPositivePair(
            f"Delta_r has {len(idx)} sign change(s) on (0, {lam_max:.4g}] for c={params.c}, D={params.D}, r={params.r}"
        )
    f = lambda lam: float(eval_delta_r(params, lam))
    e1 = brentq(f, grid[idx[0]], grid[idx[0] + 1], xtol=1e-15)
    e2 = brentq(f, grid[idx[1]], grid[idx[1] + 1], xtol=1e-15)
    return PositiveRootPair(e1, e2)


def check_epsilon_window(params: DelayedCharParams, eta1: float, eta2: float, eps: float) -> bool:
    if eps <= 0 or eta1 + eps >= eta2:
        raise InvalidEpsilon(f"eps={eps} outside the window (0, {eta2 - eta1})")
    return bool(eval_delta_r(params, eta1 + eps) < 0)

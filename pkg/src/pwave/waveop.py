"""The shifted nonlinearity H, the fixed-point map F = -L^{-1} H and related checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .charpoly import PolyParams
from .errors import KinkOutsideDomain, MuTooLarge, RangeViolation
from .funcspace import Profile, WeightedNorm, finite_diff, sample_at
from .greenkernel import GreenKernel, eval_G_derivs, lattice_convolve

RANGE_TOL = 1e-8


@dataclass(frozen=True)
class Reaction:
    """Delayed logistic term ``u(xi - r) (1 - u(xi))`` with equilibria 0 and K = 1."""

    r: float = 0.0
    K: float = 1.0
    lipschitz: float = 2.0
    kind: str = "delayed-logistic"

    def __post_init__(self):
        if self.kind != "delayed-logistic":
            raise ValueError(f"unsupported reaction {self.kind!r}")
        if self.K != 1.0:
            raise ValueError("the delayed logistic reaction has K = 1")
        if self.r < 0 or self.lipschitz <= 0:
            raise ValueError("need r >= 0 and a positive Lipschitz constant")


@dataclass(frozen=True)
class HOperator:
    beta: float
    reaction: Reaction

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")


def apply_reaction(re: Reaction, u_now, u_delayed):
    return u_delayed * (1.0 - u_now)


def check_quasimonotone(hop: HOperator, samples: int = 10_000, seed: int = 0) -> bool:
    """Sample ordered histories ``phi >= psi`` in [0, K]^2 and test the shifted monotonicity."""
    rng = np.random.default_rng(seed)
    K = hop.reaction.K
    a = rng.uniform(0, K, size=(samples, 2))
    b = rng.uniform(0, K, size=(samples, 2))
    hi, lo = np.maximum(a, b), np.minimum(a, b)
    lhs = (
        apply_reaction(hop.reaction, hi[:, 0], hi[:, 1])
        - apply_reaction(hop.reaction, lo[:, 0], lo[:, 1])
        + hop.beta * (hi[:, 0] - lo[:, 0])
    )
    return bool(np.all(lhs >= -1e-15))


def _check_range(p: Profile, K: float):
    v = p.values
    lo, hi = float(np.min(v)), float(np.max(v))
    if lo < -RANGE_TOL or hi > K + RANGE_TOL:
        raise RangeViolation(f"profile range [{lo:.3e}, {hi:.6f}] leaves [0, {K}]")


def _h_values(hop: HOperator, p: Profile) -> np.ndarray:
    re = hop.reaction
    delayed = sample_at(p, p.x - re.r) if re.r > 0 else p.values
    return hop.beta * p.values + apply_reaction(re, p.values, delayed)


def apply_H(hop: HOperator, p: Profile) -> Profile:
    _check_range(p, hop.reaction.K)
    K = hop.reaction.K
    return Profile(p.grid, _h_values(hop, p), 0.0, hop.beta * K)


def h_tail_modes(hop: HOperator, p: Profile):
    """Exponential modes of H(p) left of the grid, relative to ``s = -L``."""
    t = p.left_tail
    a, kap, r = t.amplitude, t.rate, hop.reaction.r
    d = math.exp(-kap * r)
    return [(a * (hop.beta + d), kap), (-a * a * d, 2.0 * kap)]


def _h_right(hop: HOperator, p: Profile) -> float:
    k = p.right_state
    return hop.beta * k + float(apply_reaction(hop.reaction, k, k))


def apply_F(kernel: GreenKernel, hop: HOperator, p: Profile) -> Profile:
    """``F(p)(x) = -sum_j h G(x - s_j) H(p)(s_j)`` on the lattice through the grid.

    Outside the grid H is the exact image of the profile's extension, so both
    tails are geometric series. The output keeps the input's extension.
    """
    _check_range(p, hop.reaction.K)
    hv = _h_values(hop, p)
    conv = lattice_convolve(
        kernel, hv, p.grid.h, h_tail_modes(hop, p), [(_h_right(hop, p), 0.0)]
    )
    return p.with_values(-conv)


def _normalize_kinks(kinks, L):
    out = []
    for k in kinks:
        loc, j1 = float(k[0]), float(k[1])
        j2 = float(k[2]) if len(k) > 2 else 0.0
        if not -L < loc < L:
            raise KinkOutsideDomain(f"kink at {loc} outside (-{L}, {L})")
        out.append((loc, j1, j2))
    return out


def jump_correction(kernel: GreenKernel, x: np.ndarray, kinks: Sequence[tuple]) -> np.ndarray:
    """Boundary terms from integrating ``G * L(psi)`` by parts across derivative jumps.

    A kink is ``(t_i, J_i)`` or ``(t_i, J_i, K_i)`` with ``J_i = psi'(t_i-) - psi'(t_i+)``
    and ``K_i = psi''(t_i-) - psi''(t_i+)``. Returns
    ``sum_i (c G'(x - t_i) + D G(x - t_i)) J_i + c G(x - t_i) K_i``.
    """
    out = np.zeros_like(np.asarray(x, dtype=float))
    for loc, j1, *rest in kinks:
        j2 = rest[0] if rest else 0.0
        G, G1, _ = eval_G_derivs(kernel, x - loc)
        out += (kernel.c * G1 + kernel.D * G) * j1 + kernel.c * G * j2
    return out


def jump_corrected_F(kernel: GreenKernel, hop: HOperator, p: Profile, kinks: Sequence[tuple]) -> Profile:
    """``apply_F`` minus the jump terms: a piecewise-smooth solution is mapped to itself."""
    ks = _normalize_kinks(kinks, p.grid.L)
    base = apply_F(kernel, hop, p)
    if not ks:
        return base
    return base.with_values(base.values - jump_correction(kernel, p.x, ks))


@dataclass(frozen=True)
class ResidualReport:
    interior: float
    band: float
    band_width: float

    def to_dict(self):
        return {"interior": self.interior, "band": self.band, "band_width": self.band_width}


def residual_curve(params: PolyParams, re: Reaction, p: Profile) -> np.ndarray:
    d1 = finite_diff(p, 1).values
    d2 = finite_diff(p, 2).values
    d3 = finite_diff(p, 3).values
    delayed = sample_at(p, p.x - re.r) if re.r > 0 else p.values
    return params.c * d3 + params.D * d2 - params.c * d1 + apply_reaction(re, p.values, delayed)


def residual(params: PolyParams, re: Reaction, p: Profile) -> ResidualReport:
    """Sup of the profile-equation residual off a boundary band of width ``max(r, 5h)``."""
    res = np.abs(residual_curve(params, re, p))
    width = max(re.r, 5 * p.grid.h)
    band = np.abs(p.x) > p.grid.L - width
    return ResidualReport(
        float(np.max(res[~band])), float(np.max(res[band])) if band.any() else 0.0, width
    )


@dataclass(frozen=True)
class LipschitzReport:
    C_mu: float
    H_lip: float
    F_lip: float


def c_mu(kernel: GreenKernel, mu: float) -> float:
    """``int |G(u)| e^{mu |u|} du`` in closed form."""
    if mu >= kernel.gamma:
        raise MuTooLarge(f"mu={mu} >= kernel decay rate {kernel.gamma}")
    l1, l2, l3 = kernel.roots.as_tuple()
    return -kernel.A3 / (l3 - mu) - kernel.A1 / (l1 + mu) - kernel.A2 / (l2 + mu)


def lipschitz_constants(kernel: GreenKernel, hop: HOperator, w: WeightedNorm) -> LipschitzReport:
    C = c_mu(kernel, w.mu)
    H = hop.reaction.lipschitz * math.exp(w.mu * hop.reaction.r) + hop.beta
    return LipschitzReport(C, H, C * H)

"""Closed-form Green's function of ``L = c d^3 + D d^2 - c d - beta``.

``G(u) = A3 exp(l3 u)`` for ``u < 0`` and ``-(A1 exp(l1 u) + A2 exp(l2 u))``
for ``u >= 0``. The kernel is kept symbolic; every integral against it is an
exponential sum evaluated in closed form or by first-order recursions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import lfilter

from .charpoly import PolyParams, RootTriple, solve_kernel_roots
from .errors import DistinctRealRootsRequired

ROOT_RTOL = 1e-9


@dataclass(frozen=True)
class GreenKernel:
    roots: RootTriple
    c: float
    D: float
    beta: float
    A1: float
    A2: float
    A3: float

    @property
    def gamma(self) -> float:
        """Slowest decay rate of G."""
        return min(-self.roots.lambda2, self.roots.lambda3)


def build_kernel(params: PolyParams, roots: RootTriple | None = None) -> GreenKernel:
    if roots is None:
        roots = solve_kernel_roots(params)
    l1, l2, l3 = roots.as_tuple()
    scale = max(abs(l1), abs(l2), abs(l3))
    for a, b in ((l1, l2), (l1, l3), (l2, l3)):
        if abs(a - b) <= ROOT_RTOL * scale:
            raise DistinctRealRootsRequired(f"roots {a} and {b} coincide")
    c = params.c
    A1 = -1.0 / (c * (l1 - l2) * (l1 - l3))
    A2 = -1.0 / (c * (l2 - l1) * (l2 - l3))
    A3 = -1.0 / (c * (l3 - l1) * (l3 - l2))
    return GreenKernel(roots, c, params.D, params.beta, A1, A2, A3)


def kernel_from(c: float, D: float, beta: float) -> GreenKernel:
    return build_kernel(PolyParams(c, D, beta))


def eval_G(k: GreenKernel, xi):
    l1, l2, l3 = k.roots.as_tuple()
    xi = np.asarray(xi, dtype=float)
    neg = np.minimum(xi, 0.0)
    pos = np.maximum(xi, 0.0)
    out = np.where(xi < 0, k.A3 * np.exp(l3 * neg), -(k.A1 * np.exp(l1 * pos) + k.A2 * np.exp(l2 * pos)))
    return out if out.ndim else float(out)


def eval_G_derivs(k: GreenKernel, xi, side: str = "right"):
    """One-sided ``(G, G', G'')``; ``side`` only matters at ``xi == 0``."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    l1, l2, l3 = k.roots.as_tuple()
    xi = np.asarray(xi, dtype=float)
    left = (xi < 0) | ((xi == 0) & (side == "left"))
    neg = np.minimum(xi, 0.0)
    pos = np.maximum(xi, 0.0)
    eL = k.A3 * np.exp(l3 * neg)
    e1 = k.A1 * np.exp(l1 * pos)
    e2 = k.A2 * np.exp(l2 * pos)
    res = tuple(
        np.where(left, eL * l3**j, -(e1 * l1**j + e2 * l2**j)) for j in range(3)
    )
    return res if xi.ndim else tuple(float(v) for v in res)


def matching_residuals(k: GreenKernel) -> dict:
    """Continuity of G and G' at 0 and the size of the G'' jump."""
    l1, l2, l3 = k.roots.as_tuple()
    return {
        "M1": abs(k.A3 + k.A1 + k.A2),
        "M2": abs(k.A3 * l3 + k.A1 * l1 + k.A2 * l2),
        "M3": abs(-(k.A1 * l1**2 + k.A2 * l2**2) - k.A3 * l3**2 - 1.0 / k.c),
        "jump_G2": -(k.A1 * l1**2 + k.A2 * l2**2) - k.A3 * l3**2,
    }


def kernel_total_integral(k: GreenKernel) -> float:
    l1, l2, l3 = k.roots.as_tuple()
    return k.A3 / l3 + k.A1 / l1 + k.A2 / l2


def _cumulative(k: GreenKernel, u):
    """``P(u) = integral of G over (-inf, u]``."""
    l1, l2, l3 = k.roots.as_tuple()
    u = np.asarray(u, dtype=float)
    neg = np.minimum(u, 0.0)
    pos = np.maximum(u, 0.0)
    left = k.A3 * np.exp(l3 * neg) / l3
    right = k.A3 / l3 - k.A1 * np.expm1(l1 * pos) / l1 - k.A2 * np.expm1(l2 * pos) / l2
    return np.where(u < 0, left, right)


def tail_mass(k: GreenKernel, t, cut: float, side: str):
    """Exact ``int G(t - s) ds`` over ``s < cut`` (left) or ``s > cut`` (right)."""
    if side == "left":
        out = kernel_total_integral(k) - _cumulative(k, np.asarray(t, dtype=float) - cut)
    elif side == "right":
        out = _cumulative(k, np.asarray(t, dtype=float) - cut)
    else:
        raise ValueError("side must be 'left' or 'right'")
    return out if np.ndim(out) else float(out)


def lattice_convolve(
    k: GreenKernel,
    values: np.ndarray,
    h: float,
    left_modes: Sequence[tuple[float, float]] = (),
    right_modes: Sequence[tuple[float, float]] = (),
) -> np.ndarray:
    """``sum_j h G(x_i - x_j) v_j`` over the infinite lattice through the grid.

    ``values`` lives on ``x_0 < ... < x_{n-1}``. Beyond the grid the data are
    exponential sums: ``v(x_0 - m h) = sum a e^{-kappa m h}`` from ``left_modes``
    (``kappa >= 0``) and ``v(x_{n-1} + m h) = sum a e^{kappa m h}`` from
    ``right_modes`` (``kappa <= 0``). Their contributions are geometric series.
    Cost is O(n): one recursion per exponential mode of G.
    """
    l1, l2, l3 = k.roots.as_tuple()
    g = h * np.asarray(values, dtype=float)
    out = np.zeros_like(g)
    for A, lam in ((k.A1, l1), (k.A2, l2)):
        a = math.exp(lam * h)
        init = 0.0
        for coef, kap in left_modes:
            qq = math.exp((lam - kap) * h)
            init += h * coef * qq / (1.0 - qq)
        s, _ = lfilter([1.0], [1.0, -a], g, zi=[init])
        out -= A * s
    b = math.exp(-l3 * h)
    init = 0.0
    for coef, kap in right_modes:
        qq = math.exp((kap - l3) * h)
        init += h * coef * qq / (1.0 - qq)
    t, _ = lfilter([0.0, b], [1.0, -b], g[::-1], zi=[init])
    out += k.A3 * t[::-1]
    return out


def _bump(s, w):
    """Gaussian bump and its first three derivatives."""
    z = s / w
    e = np.exp(-z * z)
    d1 = -2 * z * e / w
    d2 = (4 * z * z - 2) * e / w**2
    d3 = (12 * z - 8 * z**3) * e / w**3
    return e, d1, d2, d3


def apply_L(k: GreenKernel, psi, d1, d2, d3):
    return k.c * d3 + k.D * d2 - k.c * d1 - k.beta * psi


def green_identity_check(k: GreenKernel, test_width: float = 2.0, h: float = 0.01, amplitude: float = 1.0) -> float:
    """Max over grid nodes of ``|int G(t-s) (L psi)(s) ds - psi(t)|`` for a Gaussian bump."""
    half = 12.0 * test_width + 10.0 / k.gamma
    n = 2 * int(round(half / h)) + 1
    s = np.linspace(-half, half, n)
    psi, d1, d2, d3 = (amplitude * v for v in _bump(s, test_width))
    conv = lattice_convolve(k, apply_L(k, psi, d1, d2, d3), h)
    window = np.abs(s) <= 4 * test_width
    return float(np.max(np.abs(conv - psi)[window]))

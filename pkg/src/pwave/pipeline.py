"""End-to-end wave computation: roots, kernel, bounds, iteration, classification."""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import BoundsBundle, build_subsolution, build_supersolution, construct_bounds
from .charpoly import PolyParams
from .errors import BoundsFailed
from .funcspace import Grid, Profile
from .greenkernel import GreenKernel, build_kernel, kernel_total_integral, matching_residuals
from .iterate import IterationConfig, IterationTrace, monotone_iterate
from .waveop import HOperator, Reaction, ResidualReport, residual


@dataclass
class WaveSolution:
    kernel: GreenKernel
    bounds: BoundsBundle
    upper: Profile
    lower: Profile
    profile: Profile
    trace: IterationTrace
    residual: ResidualReport
    waived: bool

    def kernel_report(self) -> dict:
        k = self.kernel
        rep = matching_residuals(k)
        rep.update({
            "roots": list(k.roots.as_tuple()),
            "A": [k.A1, k.A2, k.A3],
            "total_integral": kernel_total_integral(k),
            "gamma": k.gamma,
        })
        return rep


def solve_wave(c: float, D: float, beta: float, r: float, grid: Grid,
               cfg: IterationConfig = IterationConfig(), skip_bounds: bool = False,
               ascending: bool = False) -> WaveSolution:
    kernel = build_kernel(PolyParams(c, D, beta))
    bundle = construct_bounds(c, D, r, grid)
    if not bundle.passed and not skip_bounds:
        raise BoundsFailed(
            f"bounds fail at r={r}: super max {bundle.super_report.extreme:.3e}, "
            f"sub min {bundle.sub_report.extreme:.3e}"
        )
    upper = build_supersolution(bundle.sup_params, grid)
    lower = build_subsolution(bundle.sub_params, grid)
    hop = HOperator(beta, Reaction(r))
    prof, trace = monotone_iterate(kernel, hop, upper, lower, cfg, waive_checks=skip_bounds, ascending=ascending)
    res = residual(PolyParams(c, D, beta), hop.reaction, prof)
    return WaveSolution(kernel, bundle, upper, lower, prof, trace, res, skip_bounds)

"""Travelling waves of a delayed pseudoparabolic reaction-diffusion equation."""

from .charpoly import PolyParams, solve_delayed_positive_roots, solve_kernel_roots
from .funcspace import Grid, Profile
from .greenkernel import build_kernel
from .pipeline import solve_wave

__all__ = [
    "Grid", "PolyParams", "Profile", "build_kernel",
    "solve_delayed_positive_roots", "solve_kernel_roots", "solve_wave",
]
__version__ = "0.1.0"

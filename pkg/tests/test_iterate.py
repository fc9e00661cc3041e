import numpy as np
import pytest

from pwave.errors import MaxIterExceeded, OrderingViolated
from pwave.funcspace import Profile, is_in_gamma
from pwave.iterate import (
    IterationConfig, check_fixed_point, classify_limit, monotone_iterate, smoothness_probe,
)
from pwave.waveop import HOperator, Reaction, lipschitz_constants
from pwave.funcspace import WeightedNorm

HOP = HOperator(1.0, Reaction(0.0))


def test_reference_run(wave, kernel):
    tr = wave.trace
    assert tr.converged and tr.classification == "connects_0_to_K"
    gaps = [r.sup_gap for r in tr.records]
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))
    assert all(r.margin_lower >= -1e-8 and r.margin_upper <= 1e-8 for r in tr.records)
    assert wave.residual.interior < 1e-3
    assert check_fixed_point(kernel, HOP, wave.profile) < 1e-8
    assert is_in_gamma(wave.profile)[0]


def test_tail_ratio_below_lipschitz(wave, kernel):
    w = [r.weighted_gap for r in wave.trace.records]
    ratios = [b / a for a, b in zip(w[5:], w[6:])]
    bound = lipschitz_constants(kernel, HOP, WeightedNorm(0.05)).F_lip
    assert max(ratios) <= bound


def test_ascending_matches(wave, kernel):
    from pwave.pipeline import solve_wave
    up = solve_wave(10.0, 1.0, 1.0, 0.0, wave.profile.grid, ascending=True)
    assert np.max(np.abs(up.profile.values - wave.profile.values)) < 1e-6


def test_constant_zero_converges_once(kernel, small_grid):
    z = Profile.constant(small_grid, 0.0)
    p, tr = monotone_iterate(kernel, HOP, z, z, waive_checks=True)
    assert tr.iterations == 1 and np.all(p.values == 0)
    assert tr.classification == "degenerate"


def test_precondition_rejects_unordered(wave, kernel):
    with pytest.raises(ValueError):
        monotone_iterate(kernel, HOP, wave.lower, wave.upper)


def test_max_iter(wave, kernel):
    with pytest.raises(MaxIterExceeded) as exc:
        monotone_iterate(kernel, HOP, wave.upper, wave.lower, IterationConfig(max_iter=3))
    assert exc.value.trace.iterations == 3 and exc.value.profile is not None


def test_ordering_violation(wave, kernel):
    # a point raised above the bound breaks the descending chain
    bad = wave.upper.with_values(np.minimum(wave.upper.values + 0.3, 1.0))
    with pytest.raises((OrderingViolated, ValueError)):
        monotone_iterate(kernel, HOP, bad, wave.lower, waive_checks=True)


def test_classify(small_grid):
    re = Reaction()
    assert classify_limit(Profile.constant(small_grid, 0.5), re) == ("intermediate", 0.5)
    assert classify_limit(Profile.constant(small_grid, 0.0), re)[0] == "degenerate"


def test_smoothness(wave, small_grid):
    assert smoothness_probe(wave.profile)["d2_jump_shrinks"]
    assert smoothness_probe(wave.profile)["ends_flat"]
    assert not smoothness_probe(wave.upper)["d2_jump_shrinks"]
    flat = smoothness_probe(Profile.constant(small_grid, 0.3))
    assert flat["bounded"] and flat["ends_flat"]

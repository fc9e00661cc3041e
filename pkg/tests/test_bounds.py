import math

import numpy as np
import pytest

from pwave.bounds import (
    SubSolutionParams, SuperSolutionParams, build_subsolution, build_supersolution,
    construct_bounds, default_sub_params, find_max_delay, q_lower_bound, sub_lhs, sub_values,
    super_lhs, super_values, validate_sub_params, verify_subsolution, verify_supersolution,
)
from pwave.charpoly import DelayedCharParams, eval_delta_r, solve_delayed_positive_roots
from pwave.errors import BaseCaseFails, InvalidEpsilon, InvalidPlateau
from pwave.funcspace import Grid, is_in_gamma, pointwise_order

P0 = DelayedCharParams(10.0, 1.0, 0.0)


@pytest.fixture(scope="module")
def pair():
    return solve_delayed_positive_roots(P0)


def test_super_shape(pair, grid):
    sp = SuperSolutionParams(pair.eta1)
    assert super_values(sp, 0.0, 0, "left") == 0.5 == super_values(sp, 0.0, 0, "right")
    assert super_values(sp, 0.0, 1, "left") == pytest.approx(pair.eta1 / 2)
    assert super_values(sp, 0.0, 1, "right") == pytest.approx(pair.eta1 / 2)
    p = build_supersolution(sp, grid)
    assert is_in_gamma(p)[0]
    assert p.values[0] < 1e-4 and 1 - p.values[-1] < 1e-4


def test_sub_shape(pair, grid):
    sp = default_sub_params(pair, P0)
    assert 0 < sp.d1 < 1 and sp.xi1 < 0
    assert sp.q >= q_lower_bound(P0, sp.eta1, sp.eps)
    # xi1 maximizes the left branch: C^1 with zero slope there
    assert sub_values(sp, sp.xi1, 1, "left") == pytest.approx(0.0, abs=1e-14)
    assert sub_values(sp, sp.xi1, 0, "left") == pytest.approx(sp.d1, abs=1e-15)
    low = build_subsolution(sp, grid)
    assert not is_in_gamma(low)[0]
    up = build_supersolution(SuperSolutionParams(pair.eta1), grid)
    assert pointwise_order(low, up) == "leq"


def test_sub_param_validation(pair):
    with pytest.raises(InvalidEpsilon):
        default_sub_params(pair, P0, eps=pair.eta2 - pair.eta1)
    sp = default_sub_params(pair, P0)
    with pytest.raises(ValueError):
        validate_sub_params(SubSolutionParams(sp.eta1, sp.eta2, sp.eps, 0.5 * sp.q, sp.xi1), P0)
    with pytest.raises(InvalidPlateau):
        validate_sub_params(SubSolutionParams(sp.eta1, sp.eta2, sp.eps, sp.q, 1.0), P0)


def test_super_lhs_closed_forms(pair):
    sp = SuperSolutionParams(pair.eta1)
    e = pair.eta1
    xl = np.linspace(-30, -0.1, 50)
    u = super_values(sp, xl)
    assert np.allclose(super_lhs(sp, 10, 1, 0.0, xl), -u * u, atol=1e-14)
    xr = np.linspace(0.1, 30, 50)
    expect = 0.5 * np.exp(-e * xr) * (-2 * e * e) - 0.25 * np.exp(-2 * e * xr)
    assert np.allclose(super_lhs(sp, 10, 1, 0.0, xr), expect, atol=1e-14)


def test_sub_lhs_left_case(pair):
    sp = default_sub_params(pair, P0)
    a = sp.eta1 + sp.eps
    x = np.linspace(sp.xi1 - 40, sp.xi1 - 0.01, 50)
    lower = 0.5 * np.exp(a * x) * (-sp.q * float(eval_delta_r(P0, a)) - 0.5)
    assert np.all(sub_lhs(sp, 10, 1, 0.0, x) >= lower - 1e-14)
    assert np.all(lower >= 0)


def test_reference_verification(grid):
    b = construct_bounds(10.0, 1.0, 0.0, grid)
    assert b.passed
    assert b.super_report.extreme <= 1e-10 and b.sub_report.extreme >= -1e-10
    assert set(b.super_report.cases) == {"x<0", "0<=x<r", "x>=r"}
    assert set(b.sub_report.cases) == {"x<x1", "x1<=x<x1+r", "x>=x1+r"}
    assert b.to_dict()["passed"] is True


def test_large_delay_fails(grid):
    b = construct_bounds(10.0, 1.0, 1.0, grid)
    assert not b.super_report.passed and b.super_report.extreme > 0


def test_find_max_delay(grid):
    scan = find_max_delay(10.0, 1.0, grid)
    assert scan.r_star > 0
    assert construct_bounds(10.0, 1.0, scan.r_star, grid).passed
    assert not construct_bounds(10.0, 1.0, scan.r_star + 1e-3, grid).passed
    passing = [rec["r"] for rec in scan.records if rec["passed"]]
    assert scan.r_star >= max(passing)


def test_find_max_delay_base_case(grid):
    with pytest.raises(BaseCaseFails):
        find_max_delay(1.0, 3.0, grid)

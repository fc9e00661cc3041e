import json

import numpy as np
import pytest

from pwave.errors import GridMismatch, GridTooSmall
from pwave.funcspace import (
    Grid, Profile, TailModel, WeightedNorm, finite_diff, is_in_gamma, pointwise_order,
    read_profile, sample_at, sup_norm, weighted_diff_norm, weighted_norm, write_csv, write_json,
)


def test_grid_shape():
    g = Grid(1.0, 0.25)
    assert g.n == 9
    assert np.allclose(g.x, np.linspace(-1, 1, 9))
    with pytest.raises(ValueError):
        Grid(0.0, 0.1)


def test_profile_length_checked():
    with pytest.raises(GridMismatch):
        Profile(Grid(1.0, 0.25), np.zeros(8))


def test_norms(grid):
    w = WeightedNorm(0.05)
    assert weighted_norm(Profile.constant(grid, 0.0), w) == 0.0
    assert weighted_norm(Profile.constant(grid, 1.0), w) == 1.0
    clipped = Profile(grid, np.minimum(np.exp(0.05 * grid.x), 1.0), 0.0, 1.0)
    assert weighted_norm(clipped, w) == pytest.approx(1.0, abs=1e-12)
    assert sup_norm(clipped) == 1.0
    assert weighted_diff_norm(clipped, clipped, w) == 0.0
    with pytest.raises(ValueError):
        WeightedNorm(-1.0)


def test_pointwise_order(small_grid):
    x = small_grid.x
    p = Profile(small_grid, 0.5 * (1 + np.tanh(x)))
    q = Profile(small_grid, 0.5 * (1 + np.tanh(x + 1)))
    r = Profile(small_grid, 0.5 * (1 + np.tanh(2 * x)))
    assert pointwise_order(p, p) == "equal"
    assert pointwise_order(p, q) == "leq"
    assert pointwise_order(q, p) == "geq"
    assert pointwise_order(p, r) == "incomparable"


def test_gamma_membership(grid):
    tanh = Profile(grid, 0.5 * (1 + np.tanh(grid.x)))
    assert is_in_gamma(tanh)[0]
    ok, diag = is_in_gamma(Profile.constant(grid, 0.5))
    assert not ok and diag["left_gap"] == 0.5


def test_sample_at(small_grid):
    x = small_grid.x
    p = Profile(small_grid, 0.5 * (1 + np.tanh(x)))
    assert sample_at(p, x[17]) == p.values[17]
    assert sample_at(p, -small_grid.L - 5) == 0.0
    assert sample_at(p, small_grid.L + 5) == 1.0
    mid = 0.5 * (x[40] + x[41])
    assert sample_at(p, mid) == pytest.approx(0.5 * (p.values[40] + p.values[41]), abs=1e-15)
    tailed = Profile(small_grid, p.values, tail=TailModel(p.values[0], 2.0))
    assert sample_at(tailed, -small_grid.L - 1) == pytest.approx(p.values[0] * np.exp(-2.0))


def test_finite_diff_linear(small_grid):
    p = Profile(small_grid, 0.3 * small_grid.x + 1.0)
    assert np.allclose(finite_diff(p, 1).values, 0.3, atol=1e-10)
    assert np.allclose(finite_diff(p, 2).values, 0.0, atol=1e-8)
    assert np.allclose(finite_diff(p, 3).values, 0.0, atol=1e-6)


def test_finite_diff_order():
    errs = []
    for h in (0.1, 0.05):
        g = Grid(3.0, h)
        p = Profile(g, np.sin(g.x))
        d3 = finite_diff(p, 3).values
        inner = np.abs(g.x) <= 2.0
        errs.append(np.max(np.abs(d3 + np.cos(g.x))[inner]))
    assert errs[0] / errs[1] > 12
    g = Grid(10.0, 0.01)
    p = Profile(g, np.exp(0.1 * g.x))
    assert np.max(np.abs(finite_diff(p, 3).values - 1e-3 * p.values)[10:-10]) < 1e-7


def test_finite_diff_small_grid():
    with pytest.raises(GridTooSmall):
        finite_diff(Profile(Grid(1.0, 0.5), np.zeros(5)), 1)


def test_csv_json_roundtrip(tmp_path, small_grid):
    p = Profile(small_grid, 0.5 * (1 + np.tanh(small_grid.x)), tail=TailModel(1e-3, 0.7))
    write_csv(p, tmp_path / "p.csv")
    write_json(p, tmp_path / "p.json", mu=0.05)
    q = read_profile(tmp_path / "p.csv")
    assert np.array_equal(p.values, q.values)
    assert q.tail == p.tail and q.grid == p.grid
    meta = json.loads((tmp_path / "p.json").read_text())
    assert meta["weighted_norm"]["mu"] == 0.05

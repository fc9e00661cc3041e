import json

import pytest

from pwave.cli import main
from pwave.errors import EXIT_CODES


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_defaults_flag(capsys):
    code, out, _ = _run(capsys, "--defaults")
    assert code == 0 and json.loads(out)["version"] == 1


def test_roots(tmp_path, capsys):
    code, out, _ = _run(capsys, "roots", "--out", str(tmp_path))
    rep = json.loads(out)
    assert code == 0
    assert rep["kernel_roots"] == pytest.approx([-1.0, -0.1, 1.0], abs=1e-14)
    assert rep["mu0"] == pytest.approx(0.1)
    assert rep["positive_pair"]["status"] == "ok"
    for row in rep["re_delta_imag_axis"]:
        assert row["re"] == pytest.approx(row["expected"], abs=1e-12)


def test_roots_errors(tmp_path, capsys):
    assert _run(capsys, "roots", "--c", "1", "--D", "1", "--out", str(tmp_path))[0] == 2
    code, out, _ = _run(capsys, "roots", "--c", "1", "--D", "3", "--out", str(tmp_path))
    assert code == 3 and json.loads(out)["positive_pair"]["status"] == "NoPositivePair"


def test_kernel(tmp_path, capsys):
    code, out, _ = _run(capsys, "kernel", "--out", str(tmp_path))
    rep = json.loads(out)
    assert code == 0
    assert max(rep["M1"], rep["M2"], rep["M3"]) < 1e-12
    assert (tmp_path / "kernel.csv").read_text().startswith("xi,G,dG,d2G")


def test_verify(tmp_path, capsys):
    code, out, _ = _run(capsys, "verify-bounds", "--out", str(tmp_path))
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert set(rep["super"]["cases"]) == {"x<0", "0<=x<r", "x>=r"}
    assert rep["r_star"] > 0


def test_solve_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(capsys, "solve", "--out", str(a))[0] == 0
    assert _run(capsys, "--seed", "0", "solve", "--out", str(b))[0] == 0
    for name in ("profile.csv", "profile.json", "trace.csv", "summary.json", "plot.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    s = json.loads((a / "summary.json").read_text())
    assert s["classification"] == "connects_0_to_K"
    assert s["residual"]["interior"] < 1e-3 and s["bounds_waived"] is False


def test_solve_beyond_r_star(tmp_path, capsys):
    code, _, err = _run(capsys, "solve", "--tau", "0.05", "--out", str(tmp_path))
    assert code == EXIT_CODES["BoundsFailed"] and "super max" in err


def test_skip_bounds(tmp_path, capsys):
    code, _, _ = _run(capsys, "solve", "--tau", "0.05", "--skip-bounds", "--out", str(tmp_path))
    s = json.loads((tmp_path / "summary.json").read_text())
    assert code == 0 and s["bounds_waived"] is True


def test_evolve(tmp_path, capsys):
    assert _run(capsys, "solve", "--out", str(tmp_path))[0] == 0
    code, out, _ = _run(capsys, "evolve", "--T", "1", "--X", "120", "--out", str(tmp_path))
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "pass"
    assert (tmp_path / "fronts.csv").read_text().startswith("t,xi_half")


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"unknown": 1}')
    assert _run(capsys, "roots", "--config", str(cfg), "--out", str(tmp_path))[0] == EXIT_CODES["InvalidConfig"]


def test_exit_codes_unique():
    assert len(set(EXIT_CODES.values())) == len(EXIT_CODES)

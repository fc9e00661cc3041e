import json

import pytest

from pwave.config import DEFAULTS, build_config, dumps, load_config, resolve_mu
from pwave.errors import InvalidConfig


def test_defaults():
    cfg = build_config()
    assert cfg["c"] == 10.0 and cfg.r == 0.0
    assert cfg["pde"]["X"] == 300.0
    assert resolve_mu(cfg.data) == pytest.approx(0.05)
    assert DEFAULTS["pde"]["X"] is None


def test_overrides(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"tau": 0.01, "grid": {"h": 0.02}}))
    cfg = load_config(path, {"pde.T": 2.0})
    assert cfg.r == pytest.approx(0.1)
    assert cfg["grid"] == {"L": 100.0, "h": 0.02}
    assert cfg["pde"]["X"] == 200.0


@pytest.mark.parametrize("over", [
    {"nope": 1}, {"c": -1.0}, {"K": 2.0}, {"tau": -0.1}, {"grid": 3}, {"mu": 0.5},
])
def test_rejections(over):
    with pytest.raises(InvalidConfig):
        resolve_mu(build_config(over).data)


def test_unreadable(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(InvalidConfig):
        load_config(bad)


def test_dumps_stable():
    assert dumps({"b": float("inf"), "a": 1}) == '{\n  "a": 1,\n  "b": "inf"\n}\n'

import json

import pytest

from polytile.config import ENV_VAR
from polytile.config import Config


def test_defaults(monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)
    config = Config.load()
    assert config == Config()
    assert config.node_budget == 1_000_000
    assert config.export_format == "cells"


def test_load_from_env(tmp_path, monkeypatch):
    path = tmp_path / "polytile.json"
    path.write_text(json.dumps({"max_torus": 6, "outdir": "out"}))
    monkeypatch.setenv(ENV_VAR, str(path))
    config = Config.load()
    assert config.max_torus == 6 and config.outdir == "out"
    assert Config.load(str(path)).to_dict()["max_torus"] == 6


@pytest.mark.parametrize(
    "data",
    [{"bogus": 1}, {"offset_budget": -3}, {"export_format": "stl"}, {"outdir": 3}],
)
def test_invalid_config(tmp_path, data):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ValueError):
        Config.load(str(path))


def test_override_skips_none():
    config = Config().override(node_budget=10, outdir=None)
    assert config.node_budget == 10
    assert config.outdir == "polytile_out"

import json
import math
from pathlib import Path

import pytest

from tra_spectrum.config import ConfigError, load_config, parse_config
from tra_spectrum.errors import DomainError


def test_minimal_document_gets_defaults():
    cfg = parse_config({"lambda": 1, "u": [1, -50, 2]})
    assert cfg.u == (1.0, -50.0, 2.0)
    assert (cfg.lam, cfg.ell, cfg.N) == (1.0, 0, 50)
    assert cfg.cs.rho == 10.0 and cfg.cs.theta == 0.0 and cfg.cs.kquad is None
    assert (cfg.cs.drho, cfg.cs.dtheta, cfg.cs.tol) == (1.0, 1e-3, 1e-4)
    assert cfg.pps.grid == 64 and cfg.pps.eps_min is None
    assert cfg.sweep.frames == 61
    assert cfg.out == Path("out") and cfg.workers is None


def test_table3_document_accepted():
    cfg = parse_config({"u": [2, -80, 120], "ell": 0, "cs": {"rho": 40, "theta": 0.8}, "N": 50})
    assert cfg.cs.rho == 40.0 and cfg.cs.theta == 0.8 and cfg.N == 50


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"u": [-1, 0, 1]}, "u[0]"),
        ({"u": [0, 0, 1]}, "u[0]"),
        ({"u": [1, "x", 1]}, "u[1]"),
        ({"u": [1, 2]}, "u"),
        ({}, "u"),
        ({"u": [1, -50, 2], "lambda": -1}, "lambda"),
        ({"u": [1, -50, 2], "ell": 1.5}, "ell"),
        ({"u": [1, -50, 2], "ell": -1}, "ell"),
        ({"u": [1, -50, 2], "N": True}, "N"),
        ({"u": [1, -50, 2], "colour": 3}, "colour"),
        ({"u": [1, -50, 2], "cs": {"theta": 2.0}}, "cs.theta"),
        ({"u": [1, -50, 2], "cs": {"thetta": 0.1}}, "cs.thetta"),
        ({"u": [1, -50, 2], "cs": {"kquad": 10}}, "cs.kquad"),
        ({"u": [1, -50, 2], "cs": {"theta": 1.57, "dtheta": 0.01}}, "cs.dtheta"),
        ({"u": [1, -50, 2], "cs": 3}, "cs"),
        ({"u": [1, -50, 2], "pps": {"eps_min": 1.0}}, "pps.eps_min"),
        ({"u": [1, -50, 2], "N": 5, "pps": {"curves": 6}}, "pps.curves"),
        ({"u": [1, -50, 2], "sweep": {"frames": 0}}, "sweep.frames"),
        ({"u": [1, -50, 2], "wavefunction": {"r_max": math.inf}}, "wavefunction.r_max"),
        ({"u": [1, -50, 2], "out": 5}, "out"),
        ([1, 2], "$"),
    ],
)
def test_errors_name_the_field(doc, path):
    with pytest.raises(ConfigError) as info:
        parse_config(doc)
    assert info.value.path == path
    assert str(info.value).startswith(path + ":")
    assert isinstance(info.value, DomainError)


def test_load_inline_and_file(tmp_path):
    doc = {"u": [2, -80, 120], "ell": 2, "cs": {"rho": 50, "theta": 0.8}}
    inline = load_config(json.dumps(doc))
    f = tmp_path / "run.json"
    f.write_text(json.dumps(doc))
    from_file = load_config(f)
    assert inline == from_file
    assert from_file.ell == 2


def test_invalid_json():
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config('{"u": [1, 2,')


def test_missing_file():
    with pytest.raises(OSError):
        load_config("/nonexistent/run.json")

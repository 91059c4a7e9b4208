"""Run configuration: JSON document -> validated RunConfig."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import DomainError


class ConfigError(DomainError):
    """Invalid configuration; the message starts with the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class PpsSettings:
    eps_min: float | None = None
    grid: int = 64
    curves: int | None = None


@dataclass
class HdSettings:
    kquad: int | None = None


@dataclass
class CsSettings:
    rho: float = 10.0
    theta: float = 0.0
    kquad: int | None = None
    drho: float = 1.0
    dtheta: float = 1e-3
    tol: float = 1e-4
    bound_tol: float | None = None


@dataclass
class SweepSettings:
    v1_from: float = -100.0
    v1_to: float = -40.0
    frames: int = 61


@dataclass
class WavefunctionSettings:
    r_max: float = 8.0
    points: int = 401
    n_terms: int | None = None
    n_scan: int = 30


@dataclass
class RunConfig:
    u: tuple[float, float, float]
    lam: float = 1.0
    ell: int = 0
    N: int = 50
    pps: PpsSettings = field(default_factory=PpsSettings)
    hd: HdSettings = field(default_factory=HdSettings)
    cs: CsSettings = field(default_factory=CsSettings)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    wavefunction: WavefunctionSettings = field(default_factory=WavefunctionSettings)
    out: Path = Path("out")
    workers: int | None = None


def _number(doc, key, path, default=None, *, positive=False, negative=False):
    if key not in doc or doc[key] is None:
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{path}{key}", f"expected a finite number, got {v!r}")
    if positive and not v > 0:
        raise ConfigError(f"{path}{key}", f"must be > 0, got {v}")
    if negative and not v < 0:
        raise ConfigError(f"{path}{key}", f"must be < 0, got {v}")
    return float(v)


def _integer(doc, key, path, default=None, minimum=None):
    if key not in doc or doc[key] is None:
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}{key}", f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{path}{key}", f"must be >= {minimum}, got {v}")
    return v


def _section(doc, key):
    sec = doc.get(key, {})
    if not isinstance(sec, dict):
        raise ConfigError(key, "expected an object")
    return sec


def _check_keys(doc, allowed, path):
    extra = sorted(set(doc) - set(allowed))
    if extra:
        raise ConfigError(f"{path}{extra[0]}", "unknown field")


def parse_config(doc: dict[str, Any]) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("$", "top level must be a JSON object")
    _check_keys(doc, {"lambda", "u", "ell", "N", "pps", "hd", "cs", "sweep", "wavefunction", "out", "workers"}, "")
    if "u" not in doc:
        raise ConfigError("u", "required field missing")
    u = doc["u"]
    if not isinstance(u, list) or len(u) != 3:
        raise ConfigError("u", "expected a list [u0, u1, u2]")
    for i, v in enumerate(u):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"u[{i}]", f"expected a finite number, got {v!r}")
    if not u[0] > 0:
        raise ConfigError("u[0]", f"u0 = V0/lambda^2 must be > 0, got {u[0]}")

    cfg = RunConfig(u=(float(u[0]), float(u[1]), float(u[2])))
    cfg.lam = _number(doc, "lambda", "", 1.0, positive=True)
    cfg.ell = _integer(doc, "ell", "", 0, minimum=0)
    cfg.N = _integer(doc, "N", "", 50, minimum=1)
    cfg.workers = _integer(doc, "workers", "", None, minimum=1)
    if "out" in doc:
        if not isinstance(doc["out"], str):
            raise ConfigError("out", "expected a path string")
        cfg.out = Path(doc["out"])

    sec = _section(doc, "pps")
    _check_keys(sec, {"eps_min", "grid", "curves"}, "pps.")
    cfg.pps = PpsSettings(
        _number(sec, "eps_min", "pps.", None, negative=True),
        _integer(sec, "grid", "pps.", 64, minimum=4),
        _integer(sec, "curves", "pps.", None, minimum=1),
    )
    if cfg.pps.curves is not None and cfg.pps.curves > cfg.N:
        raise ConfigError("pps.curves", f"must not exceed N = {cfg.N}")

    sec = _section(doc, "hd")
    _check_keys(sec, {"kquad"}, "hd.")
    cfg.hd = HdSettings(_integer(sec, "kquad", "hd.", None, minimum=cfg.N))

    sec = _section(doc, "cs")
    _check_keys(sec, {"rho", "theta", "kquad", "drho", "dtheta", "tol", "bound_tol"}, "cs.")
    theta = _number(sec, "theta", "cs.", 0.0)
    if not 0 <= theta < math.pi / 2:
        raise ConfigError("cs.theta", f"must lie in [0, pi/2), got {theta}")
    cfg.cs = CsSettings(
        _number(sec, "rho", "cs.", 10.0, positive=True),
        theta,
        _integer(sec, "kquad", "cs.", None, minimum=cfg.N),
        _number(sec, "drho", "cs.", 1.0, positive=True),
        _number(sec, "dtheta", "cs.", 1e-3),
        _number(sec, "tol", "cs.", 1e-4, positive=True),
        _number(sec, "bound_tol", "cs.", None, positive=True),
    )
    if not 0 <= theta + cfg.cs.dtheta < math.pi / 2:
        raise ConfigError("cs.dtheta", "perturbed theta leaves [0, pi/2)")

    sec = _section(doc, "sweep")
    _check_keys(sec, {"v1_from", "v1_to", "frames"}, "sweep.")
    cfg.sweep = SweepSettings(
        _number(sec, "v1_from", "sweep.", -100.0),
        _number(sec, "v1_to", "sweep.", -40.0),
        _integer(sec, "frames", "sweep.", 61, minimum=1),
    )

    sec = _section(doc, "wavefunction")
    _check_keys(sec, {"r_max", "points", "n_terms", "n_scan"}, "wavefunction.")
    cfg.wavefunction = WavefunctionSettings(
        _number(sec, "r_max", "wavefunction.", 8.0, positive=True),
        _integer(sec, "points", "wavefunction.", 401, minimum=2),
        _integer(sec, "n_terms", "wavefunction.", None, minimum=2),
        _integer(sec, "n_scan", "wavefunction.", 30, minimum=4),
    )
    return cfg


def load_config(source: str | Path) -> RunConfig:
    """Parse a config from a file path or from inline JSON text."""
    text = str(source)
    if not text.lstrip().startswith("{"):
        text = Path(source).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from exc
    return parse_config(doc)

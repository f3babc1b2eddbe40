"""JSON configuration for domains, symbols and experiments.

Domain kinds: ``bidisc``, ``polydisc`` (``r1``, ``r2``), ``hull``
(``points``), ``trapezoid_hull`` (``s``), ``ball`` (``radius``), ``expression``
(``rho1``, ``x_max``) and ``samples`` or ``profile_samples`` (``x``,
``rho``).  Any domain may set ``"normalize": true`` or ``"transpose": true``.

Symbol kinds: ``constant`` (``value``), ``z1``, ``z2``, ``conj_z2``,
``quasi_homogeneous`` (``radial``, ``J``) and ``sampled`` (``expr``,
``m1``, ``m2``).  ``expression`` with ``J`` reads ``expr`` as a radial
part in ``x, y``; without ``J`` (or as ``samples``) it is a full symbol in
``x, y, theta1, theta2`` sampled on an angular grid.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import domain as dm
from . import symbols as sy


class ConfigError(ValueError):
    """A configuration file is missing, malformed or inconsistent."""


def _load(ref) -> tuple[dict, Path | None]:
    if isinstance(ref, dict):
        return ref, None
    path = Path(ref)
    try:
        return json.loads(path.read_text()), path.parent
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def _need(cfg: dict, key: str, kind: str):
    if key not in cfg:
        raise ConfigError(f"{kind} config needs '{key}'")
    return cfg[key]


def build_domain(ref) -> dm.ReinhardtDomain2D:
    cfg, _ = _load(ref)
    kind = cfg.get("kind")
    try:
        if kind == "bidisc":
            d = dm.bidisc()
        elif kind == "polydisc":
            d = dm.polydisc(float(cfg.get("r1", 1.0)), float(cfg.get("r2", 1.0)))
        elif kind == "hull":
            d = dm.hull(_need(cfg, "points", kind))
        elif kind == "trapezoid_hull":
            d = dm.trapezoid_hull(float(cfg.get("s", 1.5)))
        elif kind == "ball":
            d = dm.ball(float(cfg.get("radius", 1.0)))
        elif kind == "expression":
            d = dm.from_expression(_need(cfg, "rho1", kind), float(cfg.get("x_max", 1.0)))
        elif kind in ("samples", "profile_samples"):
            d = dm.from_samples(_need(cfg, "x", kind), _need(cfg, "rho", kind))
        else:
            raise ConfigError(f"unknown domain kind {kind!r}")
    except (TypeError, KeyError) as exc:
        raise ConfigError(f"bad {kind} domain config: {exc}") from None
    if cfg.get("normalize"):
        d = d.normalize_vertical_disc()
    if cfg.get("transpose"):
        d = d.transpose()
    return d


def build_symbol(ref):
    cfg, _ = _load(ref)
    kind = cfg.get("kind")
    name = cfg.get("name")
    try:
        if kind == "constant":
            v = cfg.get("value", 1.0)
            s = sy.constant(complex(v["re"], v.get("im", 0.0)) if isinstance(v, dict) else float(v))
        elif kind == "z1":
            s = sy.z1()
        elif kind == "z2":
            s = sy.z2()
        elif kind == "conj_z2":
            s = sy.conj_z2()
        elif kind == "quasi_homogeneous" or (kind == "expression" and "J" in cfg):
            J = tuple(int(j) for j in cfg.get("J", (0, 0)))
            if len(J) != 2:
                raise ConfigError("J must have two entries")
            text = cfg["radial"] if "radial" in cfg else _need(cfg, "expr", kind)
            s = sy.quasi_homogeneous(text, J, name)
        elif kind in ("sampled", "samples", "expression"):
            s = sy.sampled(_need(cfg, "expr", kind), int(cfg.get("m1", 64)), int(cfg.get("m2", 64)), name)
        else:
            raise ConfigError(f"unknown symbol kind {kind!r}")
    except (TypeError, KeyError) as exc:
        raise ConfigError(f"bad {kind} symbol config: {exc}") from None
    return s


@dataclass
class ExperimentConfig:
    """One experiment: references to domain and symbol configs plus grids and tolerances."""

    experiment: str
    domain: Any = None
    symbol: Any = None
    grids: dict = field(default_factory=dict)
    tol: float | None = None
    threshold: float | None = None
    budget: tuple[int, int] | None = None
    out: str | None = None

    @classmethod
    def load(cls, ref) -> "ExperimentConfig":
        cfg, base = _load(ref)
        if "experiment" not in cfg:
            raise ConfigError("experiment config needs 'experiment'")
        known = set(cls.__dataclass_fields__)
        extra = set(cfg) - known
        if extra:
            raise ConfigError(f"unknown experiment config keys: {sorted(extra)}")

        def resolve(r):
            if isinstance(r, str) and base is not None and not Path(r).is_absolute():
                return str(base / r)
            return r

        budget = cfg.get("budget")
        return cls(cfg["experiment"], resolve(cfg.get("domain")), resolve(cfg.get("symbol")),
                   dict(cfg.get("grids", {})), cfg.get("tol"), cfg.get("threshold"),
                   tuple(int(b) for b in budget) if budget else None, resolve(cfg.get("out")))

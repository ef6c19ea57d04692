"""Run configuration: JSON loading, validation, and quad construction."""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .reactions import Nonlinearity, ReactionQuad, example_family

__all__ = ["Tolerances", "RunConfig", "load_config", "build_quad"]

DEFAULT_QUAD_SPEC = {"builtin": "section5", "k": 1.0, "alpha": 10.0}


@dataclass
class Tolerances:
    iter_change: float = 1e-10
    residual: float = 1e-6
    eigen: float = 1e-12
    bisection: float = 1e-10
    strict_margin: float = 1e-10

    def validate(self):
        for name, val in vars(self).items():
            if not (val > 0.0):
                raise ConfigError(f"tolerances.{name} must be positive, got {val}")


@dataclass
class RunConfig:
    n: int = 1024
    quad_spec: dict = field(default_factory=lambda: dict(DEFAULT_QUAD_SPEC))
    params: dict | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    out_dir: Path = Path("out")
    c1_value: float | None = None  # explicit override of the geometry constant
    c1_geometry: tuple = (1, 0.5)  # (dimension, inscribed radius)
    supersolution_case: str = "auto"
    gamma: float | None = None
    beta: float | None = None
    oracle: bool = False
    figures: bool = True

    def validate(self):
        if self.n < 8:
            raise ConfigError(f"grid must have n >= 8 interior nodes, got {self.n}")
        self.tolerances.validate()
        if self.supersolution_case not in (
            "auto", "F1", "F2", "F3", "unbounded", "eigenshape",
        ):
            raise ConfigError(
                f"supersolution_case {self.supersolution_case!r} unknown"
            )
        if self.params is not None:
            kinds = {"point", "ray", "rect"} & set(self.params)
            if len(kinds) != 1:
                raise ConfigError(
                    "params must hold exactly one of 'point', 'ray', 'rect'"
                )
            if "ray" in self.params:
                ts = self.params["ray"].get("t_values", [])
                if not ts or any(
                    b <= a for a, b in zip(ts, ts[1:])
                ):
                    raise ConfigError(
                        "params.ray.t_values must be strictly increasing and nonempty"
                    )
        return self


_TERM_KINDS = {"power", "exp_plateau", "root_shift"}


def _term_fn(term, where):
    kind = term.get("kind")
    if kind not in _TERM_KINDS:
        raise ConfigError(f"{where}: unknown term kind {kind!r}")
    coef = float(term.get("coef", 1.0))
    if kind == "power":
        p = float(term["exponent"])
        if p <= 0:
            raise ConfigError(f"{where}: power exponent must be positive")
        return lambda s: coef * s**p
    if kind == "exp_plateau":
        a = float(term["rate"])
        if a <= 0:
            raise ConfigError(f"{where}: exp_plateau rate must be positive")
        return lambda s: coef * np.expm1(a * s / (a + s))
    p = float(term["degree"])
    if p <= 0:
        raise ConfigError(f"{where}: root_shift degree must be positive")
    return lambda s: coef * ((1.0 + s) ** (1.0 / p) - 1.0)


def _piecewise_from_spec(spec, where):
    pieces = spec.get("pieces")
    if not pieces:
        raise ConfigError(f"{where}: needs a nonempty 'pieces' list")
    compiled = []
    for i, piece in enumerate(pieces):
        terms = piece.get("terms")
        if not terms:
            raise ConfigError(f"{where}.pieces[{i}]: needs a 'terms' list")
        fns = [_term_fn(t, f"{where}.pieces[{i}]") for t in terms]
        upto = piece.get("upto")
        if upto is None and i != len(pieces) - 1:
            raise ConfigError(f"{where}.pieces[{i}]: only the last piece may omit 'upto'")
        if upto is not None and i == len(pieces) - 1:
            raise ConfigError(f"{where}: the last piece must omit 'upto'")
        compiled.append((None if upto is None else float(upto), fns))

    splits = [u for u, _ in compiled[:-1]]
    if any(b <= a for a, b in zip(splits, splits[1:])) or any(
        u <= 0 for u in splits
    ):
        raise ConfigError(f"{where}: piece boundaries must be positive and increasing")

    def raw(fns, s):
        out = np.zeros_like(s)
        for fn in fns:
            out = out + fn(s)
        return out

    def fn(s):
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        s = np.atleast_1d(s)
        out = np.empty_like(s)
        lo_bound = 0.0
        offset = 0.0
        for i, (upto, fns) in enumerate(compiled):
            if upto is None:
                mask = s >= lo_bound
            else:
                mask = (s >= lo_bound) & (s <= upto)
            out[mask] = raw(fns, s[mask]) + offset
            if upto is not None:
                left_val = float(raw(fns, np.asarray([upto]))[0]) + offset
                nxt = compiled[i + 1][1]
                offset = left_val - float(raw(nxt, np.asarray([upto]))[0])
                lo_bound = upto
        return float(out[0]) if scalar else out

    return Nonlinearity(fn, spec.get("deriv0"), where.split(".")[-1])


def build_quad(spec):
    """ReactionQuad from its JSON spec: a named builtin or four term lists."""
    if "builtin" in spec:
        name = spec["builtin"]
        if name not in ("section5", "example"):
            raise ConfigError(f"unknown builtin quad {name!r}")
        try:
            return example_family(float(spec.get("k", 1.0)),
                                  float(spec.get("alpha", 10.0)))
        except Exception as exc:
            raise ConfigError(f"builtin quad: {exc}") from exc
    missing = {"f", "g", "h", "q"} - set(spec)
    if missing:
        raise ConfigError(f"quad spec missing keys: {sorted(missing)}")
    return ReactionQuad(
        _piecewise_from_spec(spec["f"], "quad.f"),
        _piecewise_from_spec(spec["g"], "quad.g"),
        _piecewise_from_spec(spec["h"], "quad.h"),
        _piecewise_from_spec(spec["q"], "quad.q"),
        label="custom",
    )


def load_config(path):
    """RunConfig from a JSON file; raises ConfigError naming the bad field."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc

    cfg = RunConfig()
    known = {
        "grid", "quad", "params", "tolerances", "out", "c1_interpretation",
        "supersolution_case", "gamma", "beta", "oracle", "figures",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    if "grid" in raw:
        if not isinstance(raw["grid"], int):
            raise ConfigError(f"{path}: 'grid' must be an integer")
        cfg.n = raw["grid"]
    if "quad" in raw:
        cfg.quad_spec = raw["quad"]
    if "params" in raw:
        cfg.params = raw["params"]
    if "tolerances" in raw:
        for key, val in raw["tolerances"].items():
            if not hasattr(cfg.tolerances, key):
                raise ConfigError(f"{path}: unknown tolerance {key!r}")
            setattr(cfg.tolerances, key, float(val))
    if "out" in raw:
        cfg.out_dir = Path(raw["out"])
    if "c1_interpretation" in raw:
        c1 = raw["c1_interpretation"]
        if isinstance(c1, (int, float)):
            cfg.c1_value = float(c1)
        elif isinstance(c1, dict):
            cfg.c1_geometry = (int(c1.get("dimension", 1)),
                               float(c1.get("radius", 0.5)))
        else:
            raise ConfigError(
                f"{path}: c1_interpretation must be a number or an object"
            )
    if "supersolution_case" in raw:
        cfg.supersolution_case = str(raw["supersolution_case"])
    for key in ("gamma", "beta"):
        if key in raw and raw[key] is not None:
            setattr(cfg, key, float(raw[key]))
    if "oracle" in raw:
        cfg.oracle = bool(raw["oracle"])
    if "figures" in raw:
        cfg.figures = bool(raw["figures"])
    return cfg.validate()

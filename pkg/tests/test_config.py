"""Configuration loading and quad construction from JSON specs."""

import json

import numpy as np
import pytest

from rdrobin.config import RunConfig, build_quad, load_config
from rdrobin.errors import ConfigError


def write(tmp_path, payload):
    p = tmp_path / "config.json"
    p.write_text(json.dumps(payload))
    return p


def test_defaults_are_valid():
    cfg = RunConfig()
    cfg.validate()
    assert cfg.n == 1024
    assert cfg.quad_spec["builtin"] == "section5"


def test_load_full_config(tmp_path):
    path = write(
        tmp_path,
        {
            "grid": 256,
            "quad": {"builtin": "section5", "k": 2.0, "alpha": 30.0},
            "params": {"ray": {"t_values": [2.6, 2.8]}},
            "tolerances": {"residual": 1e-7},
            "out": "results",
            "c1_interpretation": 12.5,
            "oracle": True,
            "figures": False,
        },
    )
    cfg = load_config(path)
    assert cfg.n == 256
    assert cfg.tolerances.residual == 1e-7
    assert cfg.c1_value == 12.5
    assert cfg.oracle and not cfg.figures


def test_bad_json_reports_line(tmp_path):
    p = tmp_path / "config.json"
    p.write_text('{"grid": 256,\n "quad": }')
    with pytest.raises(ConfigError, match="line 2"):
        load_config(p)


def test_unknown_key_rejected(tmp_path):
    with pytest.raises(ConfigError, match="mystery"):
        load_config(write(tmp_path, {"mystery": 1}))


def test_bad_tolerance_rejected(tmp_path):
    with pytest.raises(ConfigError, match="residual"):
        load_config(write(tmp_path, {"tolerances": {"residual": -1.0}}))


def test_ray_must_increase(tmp_path):
    with pytest.raises(ConfigError, match="t_values"):
        load_config(write(tmp_path, {"params": {"ray": {"t_values": [3.0, 2.0]}}}))


def test_c1_geometry_object(tmp_path):
    cfg = load_config(
        write(tmp_path, {"c1_interpretation": {"dimension": 1, "radius": 1.0}})
    )
    assert cfg.c1_value is None
    assert cfg.c1_geometry == (1, 1.0)


def test_builtin_quad_spec():
    quad = build_quad({"builtin": "section5", "k": 1.0, "alpha": 10.0})
    assert float(quad.f(1.0)) == pytest.approx(np.exp(0.5) - 1.0)


def test_unknown_builtin_rejected():
    with pytest.raises(ConfigError, match="builtin"):
        build_quad({"builtin": "nonesuch"})


def test_term_list_quad_matches_builtin():
    # the built-in family expressed through the generic term schema
    spec = {
        "f": {
            "deriv0": 1.0,
            "pieces": [
                {"upto": 1.0, "terms": [{"kind": "exp_plateau", "rate": 1.0}]},
                {"terms": [{"kind": "exp_plateau", "rate": 10.0}]},
            ],
        },
        "g": {
            "pieces": [
                {"upto": 1.0,
                 "terms": [{"kind": "root_shift", "degree": 2.0, "coef": 2.0}]},
                {"terms": [{"kind": "power", "exponent": 2.0, "coef": 0.5}]},
            ],
        },
        "h": {
            "pieces": [
                {"terms": [{"kind": "power", "exponent": 1.0, "coef": 0.5}]},
            ],
        },
        "q": {
            "pieces": [
                {"terms": [{"kind": "root_shift", "degree": 3.0, "coef": 3.0}]},
            ],
        },
    }
    quad = build_quad(spec)
    # f: e^{s/(s+1)} - 1 below the splice (exp_plateau with rate 1 is exactly
    # the first branch since 1*s/(1+s) = s/(s+1))
    s = np.linspace(0.0, 1.0, 7)
    assert np.allclose(quad.f(s), np.expm1(s / (s + 1.0)), atol=1e-12)
    # continuity of the glued g at the splice
    assert float(quad.g(1.0 - 1e-10)) == pytest.approx(float(quad.g(1.0 + 1e-10)),
                                                       abs=1e-8)
    # tail shape: 0.5*(s^2) + constant
    d2 = (float(quad.g(3.0)) - 2 * float(quad.g(2.0)) + float(quad.g(1.5)))
    assert float(quad.q(2.0)) > float(quad.q(1.0)) > 0.0


def test_term_list_requires_all_four():
    with pytest.raises(ConfigError, match="missing"):
        build_quad({"f": {"pieces": [{"terms": [{"kind": "power",
                                                 "exponent": 1.0}]}]}})


def test_piece_order_validated():
    bad = {
        k: {"pieces": [{"terms": [{"kind": "power", "exponent": 1.0}]}]}
        for k in "fghq"
    }
    bad["f"] = {
        "pieces": [
            {"upto": 2.0, "terms": [{"kind": "power", "exponent": 1.0}]},
            {"upto": 1.0, "terms": [{"kind": "power", "exponent": 2.0}]},
            {"terms": [{"kind": "power", "exponent": 1.0}]},
        ]
    }
    with pytest.raises(ConfigError, match="increasing"):
        build_quad(bad)

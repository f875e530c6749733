# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# test_config.py
import pytest

from src.rlbesov.config import RunConfig, merge_config, read_config_file
from src.rlbesov.criteria import Truncation
from src.rlbesov.errors import PreconditionError


def _write(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text, encoding="utf-8")
    return path


def test_read_config_file(tmp_path):
    path = _write(tmp_path, "# truncation\n\nd_max = 6\ntol=1e-10\nu = power t=3 delta=4\nformat=csv\n")
    values = read_config_file(path)
    assert values == {"d_max": 6, "tol": 1e-10, "u": "power t=3 delta=4", "format": "csv"}


@pytest.mark.parametrize("text", ["d_max 6\n", "depth=3\n", "d_max=six\n", "k_hi=high\n"])
def test_read_config_file_rejects(tmp_path, text):
    with pytest.raises(PreconditionError):
        read_config_file(_write(tmp_path, text))


def test_missing_config_file(tmp_path):
    with pytest.raises(PreconditionError) as info:
        read_config_file(tmp_path / "absent.cfg")
    assert "path" in info.value.details


def test_flags_override_file_values():
    cfg = merge_config({"d_max": 6, "seed": 3, "k_hi": 8.0},
                       {"group": "spline", "action": "eval", "d_max": 9, "seed": None, "n": 2, "x": [0.5]})
    assert cfg.d_max == 9
    assert cfg.seed == 3
    assert cfg.k_hi == 8.0
    assert cfg.params == {"n": 2, "x": [0.5]}
    assert cfg.command == "spline eval"
    assert cfg.truncation() == Truncation(cfg.tau_window, cfg.series_window, 9)


@pytest.mark.parametrize("kwargs", [{"format": "xml"}, {"threads": 0}, {"d_max": 0}, {"tol": 0.0}])
def test_run_config_validation(kwargs):
    with pytest.raises(PreconditionError):
        RunConfig(**kwargs)


def test_weight_lookup():
    cfg = RunConfig(group="criteria", action="full-line", u="power t=3")
    assert cfg.weight("u").exponent == 3.0
    assert cfg.weight("v", required=False) is None
    with pytest.raises(PreconditionError):
        cfg.weight("v")

# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# test_weights.py
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import quad

from src.rlbesov.errors import PreconditionError
from src.rlbesov.weights import (MuckenhouptScan, condb_min_order, constant_weight, doubling_check,
                                 dyadic_log_masses, dyadic_masses, estimate_rw, exp_doubling_constant,
                                 exponential_weight, monomial_weight, muckenhoupt_constant, parse_weight,
                                 power_weight, sigma_p, weight_mass)

SMALL_SCAN = MuckenhouptScan(d_max=3, tau_span=4)


@settings(max_examples=30, deadline=None)
@given(lo=st.floats(-20, 20), width=st.floats(0.01, 10), t=st.floats(-2, 5))
def test_power_mass_matches_quadrature(lo, width, t):
    w = power_weight(t)
    hi = lo + width
    points = [0.0] if lo < 0.0 < hi else None
    expected = quad(w, lo, hi, points=points, epsabs=0.0, epsrel=1e-12)[0]
    assert weight_mass(w, lo, hi) == pytest.approx(expected, rel=1e-9)


def test_closed_form_masses():
    assert weight_mass(power_weight(2), 0.0, 1.0) == pytest.approx(0.5)
    assert weight_mass(monomial_weight(0.5), 0.0, 1.0) == pytest.approx(2.0 / 3.0)
    assert weight_mass(monomial_weight(0.5), -1.0, 1.0) == pytest.approx(4.0 / 3.0)
    assert weight_mass(exponential_weight(1.0), -1.0, 2.0) == pytest.approx(math.e - 1.0 + math.e ** 2 - 1.0)
    assert weight_mass(constant_weight(3.0), 2.0, 4.5) == pytest.approx(7.5)


def test_mass_is_cached_and_stable():
    w = power_weight(3)
    first = weight_mass(w, -1.5, 2.0)
    assert (-1.5, 2.0) in w.mass_cache
    assert weight_mass(w, -1.5, 2.0) == first


def test_mass_rejects_unbounded_interval():
    with pytest.raises(PreconditionError):
        weight_mass(power_weight(3), 0.0, math.inf)
    with pytest.raises(PreconditionError):
        weight_mass(power_weight(3), 2.0, 1.0)


def test_translated_weight_moves_masses():
    w = power_weight(3, delta=1)
    moved = w.translated(2.5)
    assert weight_mass(moved, 1.5, 4.0) == pytest.approx(weight_mass(w, -1.0, 1.5), rel=1e-13)


def test_dyadic_masses_long_and_short_intervals():
    w = constant_weight(2.0)
    assert_allclose(dyadic_masses(w, -2, [0, 1]), [8.0, 8.0])
    assert_allclose(dyadic_masses(power_weight(0), 3, np.arange(4), c=0.5), np.full(4, 0.125))


def test_log_masses_agree_with_masses():
    w = power_weight(3, delta=4)
    rs = np.arange(-10, 10)
    assert_allclose(dyadic_log_masses(w, 2, rs), np.log(dyadic_masses(w, 2, rs)), rtol=1e-13)


def test_exponential_log_masses_stay_finite():
    logs = dyadic_log_masses(exponential_weight(1.0), 0, [2000, -2001])
    assert np.all(np.isfinite(logs))
    assert logs[0] == pytest.approx(2000.0 + math.log(math.e - 1.0), rel=1e-12)
    assert logs[1] == pytest.approx(logs[0], rel=1e-12)


def test_parse_weight_descriptors(tmp_path):
    assert parse_weight("power 3").exponent == 3.0
    assert parse_weight("power t=3 delta=4").exponent == -1.0
    assert parse_weight("constant c=2 shift=1").shift == 1.0
    assert parse_weight("monomial z=0.5")(4.0) == pytest.approx(2.0)
    table = tmp_path / "w.txt"
    table.write_text("# x w\n0,1\n1;2\n2 3\n", encoding="utf-8")
    w = parse_weight(f"table file={table}")
    assert w(0.5) == pytest.approx(1.5)
    assert weight_mass(w, 0.0, 1.0) == pytest.approx(1.5, rel=1e-9)


@pytest.mark.parametrize("text", ["", "bogus 1", "power t=abc", "monomial z=-1", "power 3 4", "constant -1"])
def test_parse_weight_rejects(text):
    with pytest.raises(PreconditionError):
        parse_weight(text)


def test_powered_weight():
    w = power_weight(3).powered(-1.0)
    assert w.exponent == -3.0
    assert monomial_weight(0.5).powered(2.0).params["z"] == 1.0


def test_muckenhoupt_constant_of_constant_weight():
    for rho in (1.0, 2.0, 3.5):
        estimate = muckenhoupt_constant(constant_weight(2.0), rho, scan=SMALL_SCAN)
        assert estimate.value == pytest.approx(1.0, rel=1e-12)
        assert list(estimate.as_frame().columns) == ["Lower", "Upper", "Constant"]


def test_muckenhoupt_rejects_rho_below_one():
    with pytest.raises(PreconditionError):
        muckenhoupt_constant(constant_weight(), 0.5)


def test_muckenhoupt_global_scan_sees_long_intervals():
    w = power_weight(3)
    scan = MuckenhouptScan(d_max=2, tau_span=4, d_min=-3)
    local = muckenhoupt_constant(w, 2.0, local=True, scan=scan)
    wide = muckenhoupt_constant(w, 2.0, local=False, scan=scan)
    assert wide.value >= local.value


def test_estimate_rw():
    assert estimate_rw(constant_weight(), SMALL_SCAN) == (1.0, 1.0)
    assert estimate_rw(power_weight(3), SMALL_SCAN) == (1.0, 1.0)
    lo, hi = estimate_rw(monomial_weight(0.5), SMALL_SCAN)
    # |x|**0.5 needs rho > 1.5 for its dual weight to be integrable at 0
    assert 1.0 <= lo <= hi
    assert hi > 1.5


def test_order_condition():
    assert sigma_p(1.0, 2.0) == 0.0
    assert condb_min_order(2.0, 2.0, 1.0) == 4
    assert condb_min_order(1.0, 2.0, 1.0) == 3
    assert condb_min_order(-1.0, 2.0, 1.0) == 3


def test_doubling_constants():
    pairs = [((0.0, 1.0), (0.0, 4.0)), ((2.0, 2.5), (1.0, 3.0))]
    report = doubling_check(constant_weight(), 1.0, pairs, rho_star=1.0)
    assert report.c_one == pytest.approx(1.0)
    assert report.c_two == pytest.approx(1.0)
    assert len(report.table) == 2
    no_reverse = doubling_check(power_weight(3), 2.0, pairs)
    assert math.isnan(no_reverse.c_two)


def test_doubling_rejects_bad_pair():
    with pytest.raises(PreconditionError):
        doubling_check(constant_weight(), 1.0, [((0.0, 2.0), (1.0, 3.0))])


def test_exp_doubling_constant():
    assert exp_doubling_constant(constant_weight(), [(0.0, 1.0, 4.0)]) == pytest.approx(math.log(4.0) / 4.0)
    assert exp_doubling_constant(exponential_weight(1.0), [(0.0, 1.0, 2.0), (5.0, 1.0, 1.0)]) > 0.0

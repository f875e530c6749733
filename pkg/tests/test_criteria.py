# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# test_criteria.py
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.rlbesov import criteria
from src.rlbesov.criteria import FRAK, M_BB, M_BOLD, M_SCRIPT, FunctionalSpec, Truncation, eval_functional
from src.rlbesov.errors import PreconditionError
from src.rlbesov.templates import CONVERGED, D_PROFILE_COLUMNS, DIVERGING, FUNCTIONAL_COLUMNS, HOMOGENEITY_COLUMNS
from src.rlbesov.weights import constant_weight, exponential_weight, monomial_weight, power_weight


@settings(max_examples=20, deadline=None)
@given(d=st.integers(0, 6), t=st.floats(-1, 4), side=st.sampled_from(["+", "-"]))
def test_frak_of_equal_weights_is_one(d, t, side):
    w = power_weight(t)
    result = eval_functional(FunctionalSpec(FRAK, (w, w), side=side, d=d), Truncation(8, 16, 2))
    assert result.value == 1.0
    assert result.verdict == CONVERGED


def test_frak_level_exponent():
    one = constant_weight()
    result = eval_functional(FunctionalSpec(FRAK, (one, one), d=3, kappa=0.5), Truncation(8, 16, 2))
    assert result.value == pytest.approx(2.0 ** -1.5)


def test_m_bold_diverges_for_constant_weights():
    one = constant_weight()
    result = eval_functional(FunctionalSpec(M_BOLD, (one, one)), Truncation(8, 64, 2))
    assert math.isinf(result.value)
    assert result.verdict == DIVERGING


def test_m_bold_converges_for_decaying_target(u_ex1, v_ex1, small_trunc):
    spec = FunctionalSpec(M_BOLD, (u_ex1, v_ex1), halfline=0.0)
    result = eval_functional(spec, small_trunc)
    assert math.isfinite(result.value)
    assert result.value > 0.0
    assert result.verdict != DIVERGING


def test_exponential_weights_do_not_overflow(small_trunc):
    e = exponential_weight(1.0)
    result = eval_functional(FunctionalSpec(FRAK, (e, e), d=2), small_trunc)
    assert result.value == pytest.approx(1.0)


@pytest.mark.parametrize("kwargs", [
    {"family": "nope"},
    {"side": "x"},
    {"epsilon": 1.5},
    {"p": 1.0},
    {"theta": 0},
    {"family": M_SCRIPT, "d": 0},
    {"family": M_BB, "d": 0},
])
def test_functional_spec_validation(kwargs):
    one = constant_weight()
    params = {"family": M_BOLD, "weights": (one, one), **kwargs}
    with pytest.raises(PreconditionError):
        FunctionalSpec(**params)


def test_truncation():
    trunc = Truncation(8, 32, 3)
    assert trunc.doubled() == Truncation(16, 64, 3)
    with pytest.raises(PreconditionError):
        Truncation(0, 32, 3)


def test_full_line_same_weights(small_trunc):
    u = power_weight(3)
    report = criteria.criterion_full_line(1, 0.0, 2.0, u, u, small_trunc)
    assert len(report.components) == 3
    assert report.components[2].value == 1.0
    assert list(report.as_frame().columns) == FUNCTIONAL_COLUMNS
    assert report.as_dict()["criterion"] == "full-line"


def test_half_line_upper_is_finite_for_worked_weights(u_ex1, v_ex1, small_trunc):
    report = criteria.criterion_half_line(1, 0.0, 0.0, "+", 2.0, {"u": u_ex1, "v": v_ex1}, small_trunc)
    assert math.isfinite(report.aggregate)
    assert report.verdict != DIVERGING
    assert all(component.name.startswith("~") for component in report.components)


def test_half_line_lower_and_missing_weight(u_ex1, small_trunc):
    report = criteria.criterion_half_line(1, 0.0, 0.0, "+", 2.0, {"u": u_ex1, "w": u_ex1}, small_trunc,
                                          part="lower")
    assert report.aggregate == 1.0
    with pytest.raises(PreconditionError):
        criteria.criterion_half_line(1, 0.0, 0.0, "+", 2.0, {"u": u_ex1}, small_trunc)


def test_prior_aggregate_dominates(u_ex1, v_ex1, small_trunc):
    weights = {"u": u_ex1, "v": v_ex1}
    full = criteria.criterion_half_line(1, 0.0, 0.0, "+", 2.0, weights, small_trunc)
    prior = criteria.criterion_prior_half_line(1, 0.0, 0.0, "+", 2.0, weights, small_trunc)
    assert criteria.redundancy_check(full, prior)


def test_prior_lower_reports_minimizers(u_ex1, small_trunc):
    report = criteria.criterion_prior_lower(1, 0.0, 2.0, u_ex1, u_ex1, Truncation(8, 32, 2))
    assert set(report.minimizers) == {"epsilon_M", "epsilon_MM"}
    assert len(report.components) == 2


def test_lower_criterion_same_weights(small_trunc):
    u = power_weight(2)
    report = criteria.criterion_lower(1, 0.0, 2.0, u, u, small_trunc)
    assert report.aggregate == 1.0
    assert report.verdict == CONVERGED


def test_d_profile(small_trunc):
    u = power_weight(3)
    profile = criteria.d_profile(FunctionalSpec(FRAK, (u, u)), range(0, 4), small_trunc)
    assert list(profile.columns) == D_PROFILE_COLUMNS
    assert profile["Value"].tolist() == [1.0, 1.0, 1.0, 1.0]
    with pytest.raises(PreconditionError):
        criteria.d_profile(FunctionalSpec(M_BOLD, (u, u)), range(0, 2), small_trunc)


def test_homogeneity_reduction_for_monomial_weights():
    sigma1, sigma2 = monomial_weight(0.25), monomial_weight(-0.25)
    report = criteria.homogeneity_reduction(1.25, 0.75, p=2.0, sigma1=sigma1, sigma2=sigma2, c=0.0,
                                            d_values=range(0, 6), trunc=Truncation(16, 64, 4))
    assert report.kappa_opt == pytest.approx(0.25)
    assert report.level_ratio == 1.0
    assert list(report.profile.columns) == HOMOGENEITY_COLUMNS
    assert report.max_deviation < 1e-9
    assert report.spread < 1e-9


def test_homogeneity_statement_only():
    report = criteria.homogeneity_reduction(2.0, 1.0, kappa=0.0, p=2.0)
    assert report.profile is None
    assert report.level_ratio == pytest.approx(2.0 ** 0.5)


def test_integral_form_for_power_weights(u_ex1, v_ex1):
    result = criteria.integral_form(1, 1.0, "+", u_ex1, v_ex1, 2.0, Truncation(8, 64, 2), c=0.0)
    assert math.isfinite(result.value)
    assert result.warnings == ()


def test_integral_form_flags_averaging_condition():
    result = criteria.integral_form(1, 1.0, "+", exponential_weight(8.0), constant_weight(), 2.0,
                                    Truncation(4, 64, 2), c=0.0, check=False)
    assert result.warnings


def test_usl_ratio():
    assert criteria.usl_ratio(power_weight(3), range(-10, 10)) < 4.0
    assert criteria.usl_ratio(exponential_weight(8.0), range(-10, 10)) > 4.0

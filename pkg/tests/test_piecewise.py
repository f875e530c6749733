# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# test_piecewise.py
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from src.rlbesov.errors import PreconditionError
from src.rlbesov.piecewise import (PiecewisePoly, dumps, from_json_dict, pp_antiderivative, pp_combine,
                                   pp_convolve_box, pp_derivative, pp_eval, pp_inner, pp_integral, pp_reflect,
                                   pp_scale, pp_transform, to_dyadic, to_json_dict, zero)

HAT = PiecewisePoly((0, 1, 2), [[0.0, 1.0], [1.0, -1.0]])
BOX = PiecewisePoly.single(0, 1, [1.0])


def test_to_dyadic_accepts_dyadic_values():
    assert to_dyadic(0.75) == Fraction(3, 4)
    assert to_dyadic("-5/8") == Fraction(-5, 8)
    assert to_dyadic(np.int64(3)) == 3


@pytest.mark.parametrize("value", ["1/3", float("inf"), float("nan")])
def test_to_dyadic_rejects(value):
    with pytest.raises(PreconditionError):
        to_dyadic(value)


def test_constructor_checks_layout():
    with pytest.raises(PreconditionError):
        PiecewisePoly((0, 1, 2), [[1.0]])
    with pytest.raises(PreconditionError):
        PiecewisePoly((1, 0), [[1.0]])
    with pytest.raises(PreconditionError):
        PiecewisePoly((0,), [[1.0]])


def test_eval_is_right_continuous_and_zero_outside():
    assert_allclose(pp_eval(BOX, [-0.5, 0.0, 0.999, 1.0, 3.0]), [0.0, 1.0, 1.0, 0.0, 0.0])


def test_zero_function():
    z = zero()
    assert z.is_zero
    assert z.support is None
    assert pp_eval(z, 1.0) == 0.0
    assert pp_integral(z) == 0.0


def test_combine_merges_breakpoints():
    two_boxes = pp_combine([(1.0, BOX), (1.0, pp_transform(BOX, shift=1))])
    assert two_boxes.support == (0.0, 2.0)
    assert_allclose(pp_eval(two_boxes, [0.5, 1.5, 2.0]), [1.0, 1.0, 0.0])


def test_combine_cancels_to_zero():
    assert pp_combine([(1.0, HAT), (-1.0, HAT)]).is_zero


@settings(max_examples=50, deadline=None)
@given(shift=st.integers(-8, 8), j=st.integers(-2, 2), x=st.floats(-10, 10), scale=st.floats(-4, 4))
def test_transform_matches_definition(shift, j, x, scale):
    moved = pp_transform(HAT, scale=scale, shift=shift, dilation_log2=j)
    assert_allclose(pp_eval(moved, x), scale * pp_eval(HAT, 2.0 ** j * x - shift), atol=1e-9)


def test_transform_relocates_breakpoints_exactly():
    moved = pp_transform(HAT, shift=Fraction(1, 2), dilation_log2=1)
    assert moved.breakpoints == (Fraction(1, 4), Fraction(3, 4), Fraction(5, 4))


def test_reflect():
    f = pp_combine([(1.0, HAT), (2.0, pp_transform(BOX, shift=1))])
    xs = np.linspace(-3, 3, 61) + 0.013
    assert_allclose(pp_eval(pp_reflect(f), xs), pp_eval(f, -xs), atol=1e-12)


def test_antiderivative_and_derivative():
    F = pp_antiderivative(HAT)
    assert F.right_tail is not None
    assert_allclose(pp_eval(F, [1.0, 2.0, 50.0]), [0.5, 1.0, 1.0])
    back = pp_derivative(F)
    xs = np.linspace(0.05, 1.95, 20)
    assert_allclose(pp_eval(back, xs), pp_eval(HAT, xs), atol=1e-12)


def test_antiderivative_base_inside_support():
    with pytest.raises(PreconditionError):
        pp_antiderivative(HAT, base=1)


def test_inner_and_integral():
    assert pp_inner(HAT, HAT) == pytest.approx(2.0 / 3.0, abs=1e-14)
    assert pp_inner(HAT, pp_transform(HAT, shift=1)) == pytest.approx(1.0 / 6.0, abs=1e-14)
    assert pp_inner(HAT, pp_transform(HAT, shift=5)) == 0.0
    assert pp_integral(pp_scale(HAT, 3.0)) == pytest.approx(3.0)


def test_inner_rejects_unbounded_intersection():
    tail = pp_antiderivative(BOX)
    with pytest.raises(PreconditionError):
        pp_inner(tail, tail)


def test_convolve_box_of_box_is_hat():
    xs = np.linspace(-1, 3, 41)
    assert_allclose(pp_eval(pp_convolve_box(BOX), xs), pp_eval(HAT, xs), atol=1e-14)


def test_json_document():
    f = pp_antiderivative(pp_transform(HAT, shift=Fraction(-3, 4)))
    doc = to_json_dict(f)
    assert doc["breakpoints"][0] == [-3, 2]
    restored = from_json_dict(doc)
    assert restored.breakpoints == f.breakpoints
    assert dumps(restored) == dumps(f)

# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# test_rliouville.py
import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from src.rlbesov.bspline import bspline, shifted_bspline
from src.rlbesov.errors import PreconditionError
from src.rlbesov.piecewise import pp_eval, pp_transform
from src.rlbesov.rliouville import (LEFT, RIGHT, RLSpec, difference_collapse, rl_apply, rl_duality_residual,
                                   rl_window)


def _cauchy_left(f, alpha, x, lower):
    if x <= lower:
        return 0.0
    kernel = lambda t: (x - t) ** (alpha - 1) * pp_eval(f, t)  # noqa: E731
    points = [b for b in range(math.floor(lower), math.ceil(x) + 1) if lower < b < x]
    return quad(kernel, lower, x, points=points or None, limit=200)[0] / math.factorial(alpha - 1)


def _cauchy_right(f, alpha, x, upper):
    if x >= upper:
        return 0.0
    kernel = lambda t: (t - x) ** (alpha - 1) * pp_eval(f, t)  # noqa: E731
    points = [b for b in range(math.floor(x), math.ceil(upper) + 1) if x < b < upper]
    return quad(kernel, x, upper, points=points or None, limit=200)[0] / math.factorial(alpha - 1)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_left_image_matches_cauchy_formula(alpha):
    f = shifted_bspline(2, -1)
    image = rl_apply(RLSpec(alpha), f)
    for x in (-0.5, 0.3, 1.7, 2.5, 4.0, 9.0):
        assert pp_eval(image, x) == pytest.approx(_cauchy_left(f, alpha, x, -1.0), abs=1e-9)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_right_image_matches_cauchy_formula(alpha):
    f = shifted_bspline(3, 1)
    image = rl_apply(RLSpec(alpha, RIGHT), f)
    for x in (-6.0, -0.5, 1.2, 2.5, 3.9, 6.0):
        assert pp_eval(image, x) == pytest.approx(_cauchy_right(f, alpha, x, 5.0), abs=1e-9)


def test_half_line_origin():
    f = bspline(1)
    image = rl_apply(RLSpec(2, LEFT, Fraction(0)), f)
    assert_allclose(pp_eval(image, [-1.0, 0.0, 1.0]), [0.0, 0.0, 1.0 / 6.0], atol=1e-14)


def test_origin_must_precede_support():
    with pytest.raises(PreconditionError):
        rl_apply(RLSpec(1, LEFT, 1), bspline(2))
    with pytest.raises(PreconditionError):
        rl_apply(RLSpec(1, RIGHT, 1), bspline(2))


def test_left_operator_rejects_left_tail():
    tailed = rl_apply(RLSpec(1, RIGHT), bspline(1))
    with pytest.raises(PreconditionError):
        rl_apply(RLSpec(1), tailed)


def test_spec_validation():
    with pytest.raises(PreconditionError):
        RLSpec(0)
    with pytest.raises(PreconditionError):
        RLSpec(1, side="up")
    assert RLSpec(4).gamma == 6


def test_image_keeps_polynomial_tail():
    image = rl_apply(RLSpec(3), bspline(2))
    assert image.right_tail is not None
    assert image.degree == 5
    assert len(np.trim_zeros(image.right_tail, "b")) == 3


@pytest.mark.parametrize("alpha", [1, 2, 3])
@pytest.mark.parametrize("shift", [0, Fraction(-3, 2), 5])
def test_duality_residual(alpha, shift):
    f = pp_transform(bspline(2), shift=shift, dilation_log2=1)
    g = shifted_bspline(alpha + 1, -2)
    assert rl_duality_residual(alpha, f, g) < 1e-10


def test_duality_needs_smooth_test_function():
    with pytest.raises(PreconditionError):
        rl_duality_residual(2, bspline(1), bspline(1))


@pytest.mark.parametrize("n", range(0, 5))
@pytest.mark.parametrize("alpha", range(0, 4))
def test_difference_collapse(n, alpha):
    difference, derivative = difference_collapse(n, alpha)
    xs = np.arange(-1, n + alpha + 2) + 0.37
    assert_allclose(pp_eval(difference, xs), pp_eval(derivative, xs), atol=1e-10)


def test_rl_window():
    assert rl_window(bspline(2), 10) == (-10.0, 13.0)
    assert rl_window(rl_apply(RLSpec(1), bspline(2)), 10) == (-10.0, 13.0)

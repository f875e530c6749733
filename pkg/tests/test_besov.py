# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# test_besov.py
import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.rlbesov.besov import (DyadicIndex, SeqCoeffs, SpaceParams, besov_norm_estimate, level_profile,
                               offset_sum_norm, seq_norm, wavelet_coeffs)
from src.rlbesov.bspline import bspline, bspline_gram, shifted_bspline
from src.rlbesov.errors import PreconditionError
from src.rlbesov.piecewise import pp_combine, pp_inner, pp_transform, zero
from src.rlbesov.rliouville import RLSpec, rl_apply
from src.rlbesov.templates import LEVEL_PROFILE_COLUMNS
from src.rlbesov.wavelet import SplineSystemSpec, capital_psi, euler_constants, system_elements


def test_dyadic_index_interval():
    assert DyadicIndex(2, 3, 0.5).interval == (0.875, 1.125)
    assert DyadicIndex(0, -1).length == 1.0


def test_seq_norm_levels(unit_weight):
    lam = SeqCoeffs({(0, 0): 3.0, (0, 1): 4.0, (1, 0): 1.0, (2, 5): 1.0}, d_max=2)
    # level 0: 5; level 1: 2; level 2: 4 * sqrt(1/2)
    level_two = 4.0 * math.sqrt(0.5)
    assert seq_norm(lam, SpaceParams(2.0, 2.0, 1.0, unit_weight)) == pytest.approx(
        5.0 + math.sqrt(4.0 + level_two ** 2))
    assert seq_norm(lam, SpaceParams(2.0, math.inf, 1.0, unit_weight)) == pytest.approx(5.0 + level_two)


def test_level_profile_columns(unit_weight):
    lam = SeqCoeffs({(0, 0): 1.0, (2, 0): -2.0}, d_max=3)
    profile = level_profile(lam, SpaceParams(2.0, 2.0, 0.0, unit_weight))
    assert list(profile.columns) == LEVEL_PROFILE_COLUMNS
    assert profile["Coefficients"].tolist() == [1, 0, 1, 0]
    assert profile["Max Abs Coefficient"].tolist() == [1.0, 0.0, 2.0, 0.0]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_level_zero_coefficients_are_gram_values(n):
    lam = wavelet_coeffs(bspline(n), SplineSystemSpec(n), 0)
    taus, values = lam.level(0)
    expected = np.array([bspline_gram(n, tau) for tau in taus])
    assert_allclose(values, expected, atol=1e-13)
    assert set(range(-n, n + 1)) <= set(taus.tolist())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_scaling_functions_have_no_wavelet_coefficients(n):
    f = pp_combine([(1.0, bspline(n)), (-2.0, shifted_bspline(n, 3))])
    lam = wavelet_coeffs(f, SplineSystemSpec(n), 3)
    for d in (1, 2, 3):
        _, values = lam.level(d)
        assert np.max(np.abs(values)) < 1e-10


def test_wavelet_coefficients_of_tail():
    # a tail of degree <= n only shows at level 0
    image = rl_apply(RLSpec(1), shifted_bspline(1, 0, dilation_log2=2))
    lam = wavelet_coeffs(image, SplineSystemSpec(2), 3)
    assert lam.windows[0][1] > 60
    assert lam.windows[3][1] < 10


def test_wavelet_coeffs_window_check():
    with pytest.raises(PreconditionError):
        wavelet_coeffs(bspline(2), SplineSystemSpec(2), 1, windows={0: (0, 1)})


def test_wavelet_coeffs_rejects_steep_tail():
    image = rl_apply(RLSpec(3), bspline(1))
    with pytest.raises(PreconditionError):
        wavelet_coeffs(image, SplineSystemSpec(1), 2)


def test_zero_function_has_zero_norm(unit_weight):
    estimate = besov_norm_estimate(zero(), SpaceParams(2.0, 2.0, 0.5, unit_weight), 3, 2, rw=1.0)
    assert estimate.value == 0.0
    assert estimate.tail_ratio == 0.0


def test_norm_estimate_rejects_small_order(u_ex1):
    sp = SpaceParams(2.0, 2.0, 2.0, u_ex1)
    with pytest.raises(PreconditionError) as info:
        besov_norm_estimate(bspline(2), sp, 2, 3, rw=1.0)
    assert info.value.details["minimal_n"] == 4


def test_norm_estimate_profile(u_ex1):
    f = shifted_bspline(2, Fraction(1, 2), dilation_log2=1)
    estimate = besov_norm_estimate(f, SpaceParams(2.0, 2.0, 1.0, u_ex1), 3, 4, rw=1.0)
    assert estimate.value > 0.0
    assert len(estimate.profile) == 5
    assert 0.0 <= estimate.tail_ratio < 1.0
    assert estimate.as_dict()["n"] == 3


def test_norm_grows_with_smoothness_index(unit_weight):
    f = shifted_bspline(2, 0, dilation_log2=2)
    low = besov_norm_estimate(f, SpaceParams(2.0, 2.0, 0.5, unit_weight), 3, 4, rw=1.0).value
    high = besov_norm_estimate(f, SpaceParams(2.0, 2.0, 1.5, unit_weight), 3, 4, rw=1.0).value
    assert high > low


def test_offset_sum_dominates_each_origin(unit_weight):
    f = shifted_bspline(2, 1)
    sp = SpaceParams(2.0, 2.0, 1.0, unit_weight)
    total = offset_sum_norm(f, sp, 3, 3, rw=1.0)
    single = besov_norm_estimate(f, sp, 3, 3, rw=1.0).value
    assert total >= single


def test_space_params_validation(unit_weight):
    with pytest.raises(PreconditionError):
        SpaceParams(0.0, 2.0, 1.0, unit_weight)
    with pytest.raises(PreconditionError):
        SpaceParams(1.0, 2.0, 1.0, unit_weight).p_conjugate


@pytest.mark.parametrize("d", [1, 2])
def test_detail_coefficients_match_inner_products(d):
    spec = SplineSystemSpec(2)
    f = shifted_bspline(2, 1, dilation_log2=2)
    lam = wavelet_coeffs(f, spec, 2)
    psi_element = system_elements(spec)[1]
    lambda_cap = euler_constants(2).lambda_cap
    taus, values = lam.level(d)
    assert np.max(np.abs(values)) > 1e-6
    for tau, value in zip(taus, values):
        # Psi_{(d-1) tau} = 2**((d-1)/2) Psi(2**(d-1) x - tau), Psi = Psi_{n,0,0} / Lambda_n
        element = pp_transform(psi_element.func, scale=2.0 ** ((d - 1) / 2.0), shift=int(tau), dilation_log2=d - 1)
        expected = 2.0 ** (d / 2.0) * pp_inner(f, element) / lambda_cap
        assert value == pytest.approx(expected, rel=1e-10, abs=1e-14)


def test_first_detail_coefficient_of_dilated_bspline():
    f = shifted_bspline(2, 0, dilation_log2=1)
    lam = wavelet_coeffs(f, SplineSystemSpec(2), 1)
    psi_func = capital_psi(2, 0, 0).func
    expected = math.sqrt(2.0) * pp_inner(f, psi_func) / euler_constants(2).lambda_cap
    assert lam.entries[(1, 0)] == pytest.approx(expected, rel=1e-10)

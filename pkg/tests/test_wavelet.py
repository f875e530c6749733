# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# test_wavelet.py
import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.rlbesov.bspline import b_intersection
from src.rlbesov.errors import PreconditionError
from src.rlbesov.piecewise import PiecewisePoly, pp_inner, pp_transform
from src.rlbesov.wavelet import (SplineSystemSpec, WaveletElement, bspline_element, capital_phi, capital_psi,
                                 element_inner, euler_constants, generalized_psi, lambda_coeffs, phi, psi,
                                 single_overlap_offset, theta_overlap)

INNER_TOL = 1e-8


def test_euler_constants_first_order():
    consts = euler_constants(1)
    assert consts.roots[0] == pytest.approx(2.0 - math.sqrt(3.0), abs=1e-14)
    assert consts.beta == pytest.approx(1.0 + consts.roots[0])


@pytest.mark.parametrize("n", range(1, 7))
def test_euler_roots_in_unit_interval(n):
    roots = euler_constants(n).roots
    assert len(roots) == n
    assert all(0.0 < r < 1.0 for r in roots)
    assert list(roots) == sorted(roots)


def test_lambda_coeffs_first_order():
    lam = lambda_coeffs(1)
    assert_allclose(lam.raw, [-1.0, 4.0, -1.0], atol=1e-12)


@pytest.mark.parametrize("m", range(1, 5))
def test_half_shift_weights_sum(m):
    lam = lambda_coeffs(m)
    assert math.fsum(lam.half_shift) == pytest.approx(2.0 ** -m * euler_constants(m).lambda_cap, rel=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_phi_is_orthonormal(n):
    element = phi(n)
    assert element_inner(element, element) == pytest.approx(1.0, abs=INNER_TOL)
    moved = WaveletElement(**{**element.__dict__, "first_shift": element.first_shift - 1})
    assert abs(element_inner(element, moved)) < INNER_TOL


@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi_is_orthonormal_and_orthogonal_to_phi(n):
    wavelet = psi(n)
    assert element_inner(wavelet, wavelet) == pytest.approx(1.0, abs=INNER_TOL)
    assert abs(element_inner(phi(n), wavelet)) < INNER_TOL
    assert abs(element_inner(wavelet, psi(n, s=1))) < INNER_TOL


def test_phi_rejects_tiny_tolerance():
    with pytest.raises(PreconditionError):
        phi(2, tol=1e-30)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("a", [Fraction(0), Fraction(1, 2), Fraction(-1, 2)])
def test_capital_psi_support_and_lambda(n, a):
    element = capital_psi(n, a, s=2)
    assert element.support == (2 + a - n, 2 + a + n + 1)
    assert element.extras["lambda_check"] == pytest.approx(euler_constants(n).lambda_cap, rel=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_capital_psi_is_a_wavelet(n):
    # orthogonal to every scaling function B_n(. - k)
    element = capital_psi(n)
    for k in range(-n - 2, n + 3):
        assert abs(element_inner(element, bspline_element(n, k))) < 1e-9


def test_capital_phi_is_shifted_bspline():
    element = capital_phi(2, Fraction(1, 2))
    assert element.support == (Fraction(1, 2), Fraction(7, 2))
    assert math.fsum(element.extras["alpha_prime"]) == pytest.approx(euler_constants(2).beta)


@pytest.mark.parametrize("spec", [
    SplineSystemSpec(2, m=1, k_flag=1),
    SplineSystemSpec(2, a=Fraction(1, 2), s=-1, m=3, k_flag=1),
    SplineSystemSpec(1, s=3, k_flag=0, zeta_flag=1, alpha=2),
    SplineSystemSpec(2, a=Fraction(-1, 2), m=2, k_flag=1, zeta_flag=1, alpha=1),
])
def test_generalized_psi_support(spec):
    element = generalized_psi(spec)
    radius = Fraction(spec.m * spec.k_flag, 2) + Fraction(spec.alpha * spec.zeta_flag, 2)
    lower = spec.s + spec.a - spec.n - radius
    upper = spec.s + spec.a + spec.n + 1 + radius
    assert element.support == (lower, upper)
    assert element.func.support == (float(lower), float(upper))


def test_generalized_psi_keeps_vanishing_moments():
    # the difference factor adds 2*alpha vanishing moments
    element = generalized_psi(SplineSystemSpec(1, zeta_flag=1, alpha=2))
    for k in range(1 + 1 + 4):
        monomial = PiecewisePoly.single(element.support[0], element.support[1], [0.0] * k + [1.0])
        scale = max(1.0, float(max(abs(element.support[0]), abs(element.support[1])))) ** k
        assert abs(pp_inner(element.func, monomial)) < 1e-9 * scale * float(np.max(np.abs(element.coeffs)))


@pytest.mark.parametrize("kwargs", [{"a": Fraction(1, 4)}, {"k_flag": 2}, {"n": 0}, {"zeta_flag": 1, "alpha": 6}])
def test_system_spec_validation(kwargs):
    params = {"n": 2, **kwargs}
    with pytest.raises(PreconditionError):
        SplineSystemSpec(**params)


@pytest.mark.parametrize("n_star,m_star", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_theta_overlap(n_star, m_star):
    report = theta_overlap(n_star, m_star, tau0=3)
    assert report.overlaps == 1
    assert report.quoted_s_bar == -1 - m_star - 4 * n_star
    assert report.formula > 0.0
    # raw inner product, rebuilt from the elements
    a_bar, s_bar = single_overlap_offset(n_star, m_star)
    shifted = generalized_psi(SplineSystemSpec(n_star, a=a_bar, s=s_bar, m=m_star, k_flag=1))
    base = capital_psi(n_star, 0, 0)
    inner = pp_inner(pp_transform(shifted.func, shift=3, dilation_log2=-1),
                     pp_transform(base.func, shift=3, dilation_log2=-1))
    assert report.inner_product == pytest.approx(inner, rel=1e-12)
    # rightmost B-spline of the shifted element (first coefficient) against the leftmost one of Psi_{n*,0,0}
    right = np.trim_zeros(np.asarray(shifted.coeffs), "f")[0]
    left = np.trim_zeros(np.asarray(base.coeffs), "b")[-1]
    assert inner == pytest.approx(right * left * b_intersection(n_star), rel=1e-8)
    gammas = euler_constants(n_star).gamma * euler_constants(m_star).gamma
    assert report.scale == pytest.approx(right * left * gammas / 16.0, rel=1e-8)
    assert report.inner_product == pytest.approx(report.scale * report.formula, rel=1e-12)


def test_theta_overlap_does_not_depend_on_position():
    assert theta_overlap(2, 1, tau0=0).inner_product == pytest.approx(theta_overlap(2, 1, tau0=-5).inner_product,
                                                                      rel=1e-12)


@pytest.mark.parametrize("n_star,m_star", [(1, 1), (1, 2), (2, 3), (4, 4)])
def test_single_overlap_offset_split(n_star, m_star):
    a_bar, s_bar = single_overlap_offset(n_star, m_star)
    assert a_bar in (Fraction(0), Fraction(-1, 2))
    assert 2 * (s_bar + a_bar) == -(4 * n_star + 1 + m_star)

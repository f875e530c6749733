# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# bspline.py
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConsistencyError, PreconditionError
from .piecewise import PiecewisePoly, pp_convolve_box, pp_inner, pp_transform, pp_combine
from .templates import MAX_ORDER

logger = logging.getLogger(__name__)

# Largest integer represented exactly by a double
EXACT_INT_LIMIT = 2 ** 53


@lru_cache(maxsize=None)
def bspline(n):
    """
    Cardinal B-spline ``B_n``: ``B_0`` is the indicator of ``[0, 1)`` and
    ``B_n = B_{n-1} * B_0``.

    Parameters
    ----------
    n : int
        Order, ``0 <= n <= MAX_ORDER``.

    Returns
    -------
    PiecewisePoly
        ``B_n`` with support ``[0, n+1]``, degree ``n``, integer breakpoints.

    Raises
    ------
    PreconditionError
        If ``n`` is negative or above ``MAX_ORDER``.

    Examples
    --------
    >>> from src.rlbesov.piecewise import pp_eval
    >>> pp_eval(bspline(1), 1.0)
    1.0
    >>> bspline(3).support
    (0.0, 4.0)
    """
    n = int(n)
    if n < 0 or n > MAX_ORDER:
        raise PreconditionError("B-spline order out of range", n=n, max_order=MAX_ORDER)
    if n == 0:
        return PiecewisePoly.single(0, 1, [1.0])
    return pp_convolve_box(bspline(n - 1))


def shifted_bspline(n, shift, dilation_log2=0, scale=1.0):
    """``scale * B_n(2**dilation_log2 * x - shift)``."""
    return pp_transform(bspline(n), scale=scale, shift=shift, dilation_log2=dilation_log2)


def spline_series(n, coeffs, first_shift, dilation_log2=0):
    """
    Finite B-spline series ``sum_i coeffs[i] * B_n(2**j * x + first_shift + i)``.

    Parameters
    ----------
    n : int
        Spline order.
    coeffs : sequence of float
        Coefficients, the first one against shift ``first_shift``.
    first_shift : int
        Integer added inside the argument of the first B-spline.
    dilation_log2 : int
        ``j``.

    Returns
    -------
    PiecewisePoly
        The exact sum.
    """
    terms = []
    for i, c in enumerate(coeffs):
        if c != 0.0:
            terms.append((c, shifted_bspline(n, -(first_shift + i), dilation_log2)))
    return pp_combine(terms)


def two_scale_coeffs(n):
    """Coefficients ``2**-n * binom(n+1, k)`` of ``B_n(x) = sum_k c_k B_n(2x - k)``."""
    return np.array([math.comb(n + 1, k) for k in range(n + 2)], dtype=float) / 2.0 ** n


def bspline_derivative_expansion(n, k):
    """
    Coefficients of ``B_n^(k) = sum_l c_l B_{n-k}(. - l)``.

    Parameters
    ----------
    n : int
        Spline order.
    k : int
        Derivative order, ``0 <= k <= n``.

    Returns
    -------
    list of int
        ``c_l = (-1)**l * binom(k, l)``, ``l = 0..k``.

    Raises
    ------
    PreconditionError
        If ``k > n`` or ``k < 0``.

    Notes
    -----
    The alternating signs are those of the k-th backward difference; they are
    confirmed against ``pp_derivative`` in the test suite.

    Examples
    --------
    >>> bspline_derivative_expansion(3, 2)
    [1, -2, 1]
    """
    if k < 0 or k > n:
        raise PreconditionError("derivative order must satisfy 0 <= k <= n", n=n, k=k)
    return [(-1) ** l * math.comb(k, l) for l in range(k + 1)]


def generalized_binom(top, k):
    """Binomial coefficient for any integer ``top`` and ``k >= 0``."""
    if k < 0:
        return 0
    if top >= 0:
        return math.comb(top, k)
    return (-1) ** k * math.comb(k - top - 1, k)


@dataclass(frozen=True, eq=False)
class DiffCoeffs:
    """Coefficients ``A_0..A_R`` of the inverse alpha-th difference."""

    alpha: int
    exact: tuple
    values: np.ndarray

    @property
    def R(self):
        return len(self.exact) - 1


@lru_cache(maxsize=None)
def _recurrence(alpha, R):
    values = [1]
    for r in range(1, R + 1):
        acc = 0
        for j in range(1, min(r, alpha) + 1):
            acc += (-1) ** (j - 1) * values[r - j] * math.comb(alpha, j)
        values.append(acc)
    return tuple(values)


def difference_coeffs(alpha, R):
    """
    Difference coefficients ``A_r(alpha) = sum_{j=1}^r (-1)**(j-1) A_{r-j} binom(alpha, j)``.

    Parameters
    ----------
    alpha : int
        Operator order, ``alpha >= 1``.
    R : int
        Last index, ``R >= 0``.

    Returns
    -------
    DiffCoeffs
        Exact integers and their double values.

    Raises
    ------
    PreconditionError
        If the arguments are out of range or a value is not exactly representable.
    ConsistencyError
        If the cross recurrence ``A_r(m) = sum_{1<=l<=m} A_{r-1}(l)`` fails.

    Notes
    -----
    1. The values equal ``binom(r + alpha - 1, r)``, the coefficients of ``(1 - z)**-alpha``.
    2. The cross recurrence is evaluated with the coefficients of every order
       ``l <= alpha`` and compared exactly.

    Examples
    --------
    >>> difference_coeffs(2, 3).exact
    (1, 2, 3, 4)
    """
    alpha, R = int(alpha), int(R)
    if alpha < 1 or R < 0:
        raise PreconditionError("difference coefficients need alpha >= 1 and R >= 0", alpha=alpha, R=R)
    exact = _recurrence(alpha, R)
    if max(abs(a) for a in exact) > EXACT_INT_LIMIT:
        raise PreconditionError("difference coefficient exceeds exact double range", alpha=alpha, R=R)
    for r in range(1, R + 1):
        cross = sum(_recurrence(l, R)[r - 1] for l in range(1, alpha + 1))
        if cross != exact[r]:
            raise ConsistencyError("cross recurrence of difference coefficients failed", alpha=alpha, r=r)
    values = np.array(exact, dtype=float)
    values.setflags(write=False)
    return DiffCoeffs(alpha, exact, values)


def chu_vandermonde(r, s, k):
    """
    Checks ``binom(r+s, k) = sum_n binom(r, n) binom(s, k-n)`` and returns the value.

    Raises
    ------
    PreconditionError
        If ``k < 0``.
    ConsistencyError
        If the two sides differ.

    Examples
    --------
    >>> chu_vandermonde(7, 5, 4)
    495
    """
    if k < 0:
        raise PreconditionError("k must be non-negative", k=k)
    left = generalized_binom(r + s, k)
    right = sum(generalized_binom(r, j) * generalized_binom(s, k - j) for j in range(k + 1))
    if left != right:
        raise ConsistencyError("Chu-Vandermonde identity failed", r=r, s=s, k=k, left=left, right=right)
    return left


@lru_cache(maxsize=None)
def bspline_gram(n, offset):
    """
    Gram value ``<B_n, B_n(. - offset)>``; 0 when ``|offset| > n``.

    Examples
    --------
    >>> round(bspline_gram(1, 0), 12), bspline_gram(1, 2)
    (0.666666666667, 0.0)
    """
    offset = int(offset)
    if abs(offset) > n:
        return 0.0
    return pp_inner(bspline(n), shifted_bspline(n, abs(offset)))


def gram_row(n):
    """Gram values for offsets ``-n..n`` as an array of length ``2n+1``."""
    return np.array([bspline_gram(n, k) for k in range(-n, n + 1)], dtype=float)


def b_intersection(n):
    """
    Single-overlap integral ``integral B_n(t) B_n(t - n) dt``.

    Raises
    ------
    PreconditionError
        If ``n < 1``.
    ConsistencyError
        If the computed value is not positive.
    """
    if n < 1:
        raise PreconditionError("b_intersection needs n >= 1", n=n)
    value = bspline_gram(n, n)
    if not value > 0.0:
        raise ConsistencyError("overlap integral must be positive", n=n, value=value)
    return value

# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# rliouville.py
# Riemann-Liouville operators of natural order, exact on piecewise polynomials
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bspline import bspline, shifted_bspline
from .errors import PreconditionError
from .piecewise import pp_antiderivative, pp_combine, pp_derivative, pp_eval, pp_inner, pp_reflect, to_dyadic
from .templates import RL_WINDOW

logger = logging.getLogger(__name__)

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class RLSpec:
    """
    ``alpha``-th order operator ``I_{c+}`` (``side="left"``) or ``I_{c-}`` (``side="right"``).

    ``origin=None`` stands for ``c = -inf`` on the left side and ``c = +inf`` on the right.
    """

    alpha: int
    side: str = LEFT
    origin: Fraction = None

    def __post_init__(self):
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise PreconditionError("operator order must be a natural number", alpha=self.alpha)
        if self.side not in (LEFT, RIGHT):
            raise PreconditionError("side must be 'left' or 'right'", side=self.side)
        object.__setattr__(self, "alpha", int(self.alpha))
        if self.origin is not None:
            object.__setattr__(self, "origin", to_dyadic(self.origin))

    @property
    def gamma(self):
        """``Gamma(alpha) = (alpha-1)!``."""
        return math.factorial(self.alpha - 1)


def _check_left_input(f, origin):
    if f.is_zero:
        return
    if f.left_tail is not None:
        raise PreconditionError("left operator needs f integrable on (-inf, x): f has a left tail",
                                support=f.support)
    if origin is not None and f.breakpoints[0] < origin:
        raise PreconditionError("f must vanish on (-inf, c)", c=str(origin), support_start=str(f.breakpoints[0]))


def _left_apply(alpha, f, origin):
    _check_left_input(f, origin)
    image = f
    for _ in range(alpha):
        image = pp_antiderivative(image, base=origin)
    return image


def rl_apply(spec, f):
    """
    Exact image of a piecewise polynomial under ``I_{c+-}^alpha``.

    Parameters
    ----------
    spec : RLSpec
        Order, side and origin.
    f : PiecewisePoly
        Argument; for the left operator it must not have a left tail and must vanish
        on ``(-inf, c)``; for the right operator the mirror conditions apply.

    Returns
    -------
    PiecewisePoly
        For the left side the ``alpha``-fold antiderivative from ``c`` (Cauchy's formula
        for repeated integration absorbs ``1/Gamma(alpha)``); past the support the
        image keeps its exact polynomial right tail of degree below ``alpha``.
        The right side uses the kernel ``(y-x)**(alpha-1)/Gamma(alpha)``, ``y > x``,
        and is computed as ``R I_{-c+} R`` with ``R`` the reflection.

    Raises
    ------
    PreconditionError
        If ``f`` does not vanish on the wrong side of ``c`` or is not integrable there.

    Examples
    --------
    >>> image = rl_apply(RLSpec(2), bspline(0))
    >>> pp_eval(image, 2.0)
    1.5
    """
    if spec.side == LEFT:
        return _left_apply(spec.alpha, f, spec.origin)
    origin = None if spec.origin is None else -spec.origin
    reflected = pp_reflect(f)
    try:
        image = _left_apply(spec.alpha, reflected, origin)
    except PreconditionError as e:
        raise PreconditionError("right operator needs f vanishing on (c, inf) and integrable on (x, inf)",
                                c=None if spec.origin is None else str(spec.origin), support=f.support) from e
    return pp_reflect(image)


def rl_window(f, window=RL_WINDOW):
    """Evaluation window ``[start - window, end + window]`` around the support of ``f``."""
    support = f.support
    if support is None:
        return 0.0, 0.0
    lo = support[0] if math.isfinite(support[0]) else float(f.breakpoints[0])
    hi = support[1] if math.isfinite(support[1]) else float(f.breakpoints[-1])
    return lo - window, hi + window


def _iterated_derivative(g, k):
    for _ in range(k):
        g = pp_derivative(g)
    return g


def rl_duality_residual(alpha, f, g):
    """
    Residual ``|<I_+^alpha f, g^(alpha)> - (-1)**alpha <f, g>|``.

    Parameters
    ----------
    alpha : int
        Operator order.
    f : PiecewisePoly
        Argument of the left operator with ``c = -inf``.
    g : PiecewisePoly
        Compactly supported test spline whose derivatives of orders ``< alpha``
        vanish at the ends of its support (true for ``B_m``, ``m >= alpha``).

    Raises
    ------
    PreconditionError
        If ``g`` is not compactly supported or a boundary derivative does not vanish.

    Notes
    -----
    The identity is integration by parts ``alpha`` times; it fixes the normalization
    of the operator independently of how ``Gamma(alpha)`` is placed.
    """
    spec = RLSpec(alpha)
    if g.is_zero:
        return 0.0
    if not g.is_compact:
        raise PreconditionError("duality test function must be compactly supported", support=g.support)
    lo, hi = g.support
    scale = max(1.0, float(np.max(np.abs(g.pieces))))
    for k in range(alpha):
        derivative = _iterated_derivative(g, k)
        # left limit at the right end
        ends = [pp_eval(derivative, lo), pp_eval(derivative, np.nextafter(hi, -np.inf))]
        if max(abs(value) for value in ends) > 1e-9 * scale * max(1.0, hi - lo) ** k:
            raise PreconditionError("boundary derivatives of g must vanish", k=k, values=ends)
    if f.is_zero:
        return 0.0
    image = rl_apply(spec, f)
    left = pp_inner(image, _iterated_derivative(g, alpha))
    right = (-1) ** alpha * pp_inner(f, g)
    return abs(left - right)


def difference_collapse(n, alpha):
    """
    Both sides of ``sum_m (-1)**m binom(alpha, m) B_n(x - m) = B_{n+alpha}^(alpha)(x)``.

    Returns
    -------
    tuple of PiecewisePoly
        ``(difference, derivative)``; they agree on every piece interior.
    """
    if alpha < 0:
        raise PreconditionError("difference order must be non-negative", alpha=alpha)
    difference = pp_combine([((-1) ** m * math.comb(alpha, m), shifted_bspline(n, m)) for m in range(alpha + 1)])
    derivative = _iterated_derivative(bspline(n + alpha), alpha)
    return difference, derivative

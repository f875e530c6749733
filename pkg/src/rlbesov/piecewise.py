# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# piecewise.py
# Piecewise polynomials on dyadic breakpoints: the carrier of every spline, wavelet and RL image
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import PreconditionError
from .templates import MAX_LOG2_DEN

logger = logging.getLogger(__name__)


def to_dyadic(value):
    """
    Converts a number to an exact dyadic rational.

    Parameters
    ----------
    value : int, float, str or Fraction
        Number to convert. Floats are taken with their exact binary value.

    Returns
    -------
    Fraction
        The same number with a power-of-two denominator.

    Raises
    ------
    PreconditionError
        If the denominator is not a power of two or exceeds ``2**MAX_LOG2_DEN``.

    Examples
    --------
    >>> to_dyadic(0.5)
    Fraction(1, 2)
    >>> to_dyadic("3/4")
    Fraction(3, 4)
    """
    if isinstance(value, (float, np.floating)) and not math.isfinite(float(value)):
        raise PreconditionError("breakpoint must be finite", value=value)
    if isinstance(value, np.integer):
        value = int(value)
    elif isinstance(value, np.floating):
        value = float(value)
    fraction = Fraction(value)
    den = fraction.denominator
    if den & (den - 1):
        raise PreconditionError("breakpoint is not a dyadic rational", value=str(value))
    if den.bit_length() - 1 > MAX_LOG2_DEN:
        raise PreconditionError("dyadic denominator too large", value=str(value), max_log2_den=MAX_LOG2_DEN)
    return fraction


def dyadic_pair(value):
    """Returns ``[numerator, log2(denominator)]`` of a dyadic rational."""
    fraction = to_dyadic(value)
    return [fraction.numerator, fraction.denominator.bit_length() - 1]


def _as_tail(tail):
    if tail is None:
        return None
    arr = np.array(tail, dtype=float, ndmin=1)
    if not np.any(arr):
        return None
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PiecewisePoly:
    """
    Piecewise polynomial with exact dyadic breakpoints.

    Piece ``i`` lives on ``[breakpoints[i], breakpoints[i+1])`` and is stored in the
    local monomial basis ``sum_k pieces[i, k] * (x - breakpoints[i])**k``.
    Outside the breakpoints the value is 0, except where a tail polynomial is stored:
    ``right_tail`` (local to the last breakpoint) holds for ``x >= last`` and
    ``left_tail`` (local to the first breakpoint) for ``x < first``. Tails carry the
    polynomial continuation of Riemann-Liouville images.
    """

    breakpoints: tuple
    pieces: np.ndarray
    left_tail: np.ndarray = None
    right_tail: np.ndarray = None

    def __post_init__(self):
        breakpoints = tuple(to_dyadic(b) for b in self.breakpoints)
        pieces = np.array(self.pieces, dtype=float, ndmin=2)
        if len(breakpoints) == 0:
            pieces = np.zeros((0, max(pieces.shape[1], 1)))
        elif len(breakpoints) < 2:
            raise PreconditionError("a piecewise polynomial needs at least two breakpoints")
        elif pieces.shape[0] != len(breakpoints) - 1:
            raise PreconditionError(
                "pieces count must equal breakpoints count - 1",
                breakpoints=len(breakpoints),
                pieces=pieces.shape[0],
            )
        if any(b1 >= b2 for b1, b2 in zip(breakpoints, breakpoints[1:])):
            raise PreconditionError("breakpoints must be strictly increasing")
        pieces.setflags(write=False)
        left_tail = _as_tail(self.left_tail)
        right_tail = _as_tail(self.right_tail)
        if not breakpoints and (left_tail is not None or right_tail is not None):
            raise PreconditionError("tails need breakpoints to be anchored to")
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "left_tail", left_tail)
        object.__setattr__(self, "right_tail", right_tail)

    @classmethod
    def single(cls, lower, upper, coeffs):
        """One polynomial piece on ``[lower, upper)`` with coefficients local to ``lower``."""
        return cls((lower, upper), [list(coeffs)])

    @cached_property
    def bp_values(self):
        values = np.array([float(b) for b in self.breakpoints], dtype=float)
        values.setflags(write=False)
        return values

    @property
    def is_zero(self):
        return len(self.breakpoints) == 0

    @property
    def width(self):
        """Number of coefficients needed to hold every piece and tail."""
        width = self.pieces.shape[1]
        for tail in (self.left_tail, self.right_tail):
            if tail is not None:
                width = max(width, tail.shape[0])
        return width

    @property
    def degree(self):
        """Largest degree carrying a nonzero coefficient (0 for the zero function)."""
        degree = 0
        blocks = [self.pieces] + [t[None, :] for t in (self.left_tail, self.right_tail) if t is not None]
        for block in blocks:
            nonzero = np.nonzero(np.any(block != 0.0, axis=0))[0]
            if nonzero.size:
                degree = max(degree, int(nonzero[-1]))
        return degree

    @property
    def support(self):
        """
        Closed support as a pair of floats; ``-inf``/``inf`` on sides with a tail,
        ``None`` for the zero function.
        """
        if self.is_zero:
            return None
        lower = -math.inf if self.left_tail is not None else float(self.breakpoints[0])
        upper = math.inf if self.right_tail is not None else float(self.breakpoints[-1])
        return lower, upper

    @property
    def is_compact(self):
        return self.left_tail is None and self.right_tail is None

    def __call__(self, x):
        return pp_eval(self, x)


def zero():
    """The zero piecewise polynomial."""
    return PiecewisePoly((), np.zeros((0, 1)))


def _pad(coeffs, width):
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[-1] >= width:
        return coeffs
    pad = [(0, 0)] * (coeffs.ndim - 1) + [(0, width - coeffs.shape[-1])]
    return np.pad(coeffs, pad)


def _horner(coeffs, t):
    out = np.zeros(np.shape(t), dtype=float)
    for k in range(coeffs.shape[-1] - 1, -1, -1):
        out = out * t + coeffs[..., k]
    return out


def _rebase(coeffs, delta):
    # sum_k c_k (x - b)^k  ->  sum_j c'_j (x - (b + delta))^j
    coeffs = np.asarray(coeffs, dtype=float)
    delta = np.asarray(delta, dtype=float)
    width = coeffs.shape[-1]
    out = np.zeros(np.broadcast_shapes(coeffs.shape, delta.shape + (width,)), dtype=float)
    powers = [np.ones_like(delta)]
    for _ in range(1, width):
        powers.append(powers[-1] * delta)
    for j in range(width):
        for k in range(j, width):
            out[..., j] += coeffs[..., k] * math.comb(k, j) * powers[k - j]
    return out


def pp_eval(f, x):
    """
    Evaluates a piecewise polynomial.

    Parameters
    ----------
    f : PiecewisePoly
        Function to evaluate.
    x : float or array_like
        Evaluation points.

    Returns
    -------
    float or numpy.ndarray
        Values of ``f``; right-continuous at breakpoints, 0 outside the support
        (tails excepted). A scalar input gives a float.

    Examples
    --------
    >>> box = PiecewisePoly.single(0, 1, [1.0])
    >>> pp_eval(box, 0.5), pp_eval(box, 1.0)
    (1.0, 0.0)
    """
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    out = np.zeros(xs.shape, dtype=float)
    if not f.is_zero:
        bp = f.bp_values
        count = f.pieces.shape[0]
        idx = np.searchsorted(bp, xs, side="right") - 1
        inside = (idx >= 0) & (idx < count)
        if np.any(inside):
            out[inside] = _horner(f.pieces[idx[inside]], xs[inside] - bp[idx[inside]])
        left = idx < 0
        if f.left_tail is not None and np.any(left):
            out[left] = _horner(f.left_tail, xs[left] - bp[0])
        right = idx >= count
        if f.right_tail is not None and np.any(right):
            out[right] = _horner(f.right_tail, xs[right] - bp[-1])
    return float(out[0]) if scalar else out


def cell_coefficients(f, grid):
    """
    Local coefficients of ``f`` on every cell of a grid.

    Parameters
    ----------
    f : PiecewisePoly
        Function to sample.
    grid : sequence
        Strictly increasing dyadic grid points. Every breakpoint of ``f`` lying strictly
        inside ``[grid[0], grid[-1]]`` must be a grid point.

    Returns
    -------
    numpy.ndarray
        Array of shape ``(len(grid) - 1, f.width)``; row ``i`` is the polynomial of
        ``f`` on ``[grid[i], grid[i+1])`` local to ``grid[i]`` (zeros off the support).

    Raises
    ------
    PreconditionError
        If a breakpoint of ``f`` falls strictly inside a grid cell.
    """
    g = np.asarray([float(x) for x in grid], dtype=float)
    width = f.width
    out = np.zeros((max(len(g) - 1, 0), width), dtype=float)
    if f.is_zero or len(g) < 2:
        return out
    bp = f.bp_values
    inner = bp[(bp > g[0]) & (bp < g[-1])]
    if inner.size and not np.all(np.isin(inner, g)):
        missing = inner[~np.isin(inner, g)]
        raise PreconditionError("grid does not contain every breakpoint", first_missing=float(missing[0]))
    starts = g[:-1]
    mids = 0.5 * (g[:-1] + g[1:])
    count = f.pieces.shape[0]
    idx = np.searchsorted(bp, mids, side="right") - 1
    inside = (idx >= 0) & (idx < count)
    if np.any(inside):
        pieces = _pad(f.pieces, width)
        out[inside] = _rebase(pieces[idx[inside]], starts[inside] - bp[idx[inside]])
    left = idx < 0
    if f.left_tail is not None and np.any(left):
        tail = np.broadcast_to(_pad(f.left_tail, width), (int(left.sum()), width))
        out[left] = _rebase(tail, starts[left] - bp[0])
    right = idx >= count
    if f.right_tail is not None and np.any(right):
        tail = np.broadcast_to(_pad(f.right_tail, width), (int(right.sum()), width))
        out[right] = _rebase(tail, starts[right] - bp[-1])
    return out


def _trimmed(breakpoints, pieces, left_tail, right_tail):
    breakpoints = list(breakpoints)
    pieces = np.asarray(pieces, dtype=float)
    left_tail = _as_tail(left_tail)
    right_tail = _as_tail(right_tail)
    start, stop = 0, pieces.shape[0]
    if left_tail is None:
        while start < stop and not np.any(pieces[start]):
            start += 1
    if right_tail is None:
        while stop > start and not np.any(pieces[stop - 1]):
            stop -= 1
    if start == stop:
        if left_tail is None and right_tail is None:
            return zero()
        # only tails survive: keep one anchoring piece
        start, stop = 0, pieces.shape[0]
    return PiecewisePoly(tuple(breakpoints[start:stop + 1]), pieces[start:stop], left_tail, right_tail)


def pp_combine(terms):
    """
    Linear combination ``sum_i c_i * f_i`` on the union of all breakpoints.

    Parameters
    ----------
    terms : iterable of (float, PiecewisePoly)
        Coefficients and functions.

    Returns
    -------
    PiecewisePoly
        The combination; pieces that vanish identically at either end are trimmed.
    """
    terms = [(float(c), f) for c, f in terms if not f.is_zero and c != 0.0]
    if not terms:
        return zero()
    grid = sorted({b for _, f in terms for b in f.breakpoints})
    if len(grid) < 2:
        return zero()
    width = max(f.width for _, f in terms)
    pieces = np.zeros((len(grid) - 1, width), dtype=float)
    left_tail = np.zeros(width)
    right_tail = np.zeros(width)
    first, last = float(grid[0]), float(grid[-1])
    for coef, f in terms:
        pieces += coef * _pad(cell_coefficients(f, grid), width)
        if f.left_tail is not None:
            left_tail += coef * _rebase(_pad(f.left_tail, width), first - f.bp_values[0])
        if f.right_tail is not None:
            right_tail += coef * _rebase(_pad(f.right_tail, width), last - f.bp_values[-1])
    return _trimmed(grid, pieces, left_tail, right_tail)


def pp_scale(f, scale):
    """``scale * f`` without touching the breakpoints."""
    if f.is_zero or scale == 0.0:
        return zero()
    return PiecewisePoly(
        f.breakpoints,
        scale * f.pieces,
        None if f.left_tail is None else scale * f.left_tail,
        None if f.right_tail is None else scale * f.right_tail,
    )


def pp_transform(f, scale=1.0, shift=0, dilation_log2=0):
    """
    Returns ``scale * f(2**dilation_log2 * x - shift)`` with exact breakpoint relocation.

    Parameters
    ----------
    f : PiecewisePoly
        Function to transform.
    scale : float
        Amplitude factor (e.g. ``2**(d/2)`` for L2-normalized dilations).
    shift : dyadic rational
        Translation inside the argument.
    dilation_log2 : int
        Base-2 logarithm of the dilation factor; negative values stretch.

    Returns
    -------
    PiecewisePoly
        Transformed function. Breakpoints ``b`` move to ``(b + shift) / 2**dilation_log2``.

    Raises
    ------
    PreconditionError
        If ``shift`` is not dyadic.

    Examples
    --------
    >>> hat = PiecewisePoly((0, 1, 2), [[0.0, 1.0], [1.0, -1.0]])
    >>> pp_eval(pp_transform(hat, shift=1), 1.5) == pp_eval(hat, 0.5)
    True
    """
    shift = to_dyadic(shift)
    j = int(dilation_log2)
    if f.is_zero:
        return zero()
    factor = Fraction(2) ** j
    breakpoints = tuple(to_dyadic((b + shift) / factor) for b in f.breakpoints)
    width = f.width
    mult = np.array([2.0 ** (j * k) for k in range(width)])

    def move(coeffs):
        if coeffs is None:
            return None
        return scale * coeffs * mult[: coeffs.shape[-1]]

    return PiecewisePoly(breakpoints, move(f.pieces), move(f.left_tail), move(f.right_tail))


def pp_reflect(f):
    """Returns ``x -> f(-x)``; left and right tails swap sides."""
    if f.is_zero:
        return zero()
    bp = f.bp_values
    width = f.pieces.shape[1]
    signs = np.array([(-1.0) ** k for k in range(width)])
    # piece i reflected is local to -b_i, the right end of its new interval
    reflected = f.pieces * signs
    rebased = _rebase(reflected, -(bp[1:] - bp[:-1]))
    breakpoints = tuple(-b for b in reversed(f.breakpoints))

    def flip(tail):
        if tail is None:
            return None
        return tail * np.array([(-1.0) ** k for k in range(tail.shape[0])])

    return PiecewisePoly(breakpoints, rebased[::-1], flip(f.right_tail), flip(f.left_tail))


def _derive(coeffs):
    width = coeffs.shape[-1]
    if width == 1:
        return np.zeros_like(coeffs)
    return coeffs[..., 1:] * np.arange(1, width, dtype=float)


def pp_derivative(f):
    """
    Piecewise derivative (jumps at breakpoints are ignored).

    Examples
    --------
    >>> hat = PiecewisePoly((0, 1, 2), [[0.0, 1.0], [1.0, -1.0]])
    >>> pp_eval(pp_derivative(hat), [0.5, 1.5]).tolist()
    [1.0, -1.0]
    """
    if f.is_zero:
        return zero()
    return PiecewisePoly(
        f.breakpoints,
        _derive(f.pieces),
        None if f.left_tail is None else _derive(f.left_tail),
        None if f.right_tail is None else _derive(f.right_tail),
    )


def _integrate(coeffs):
    width = coeffs.shape[-1]
    out = np.zeros(coeffs.shape[:-1] + (width + 1,), dtype=float)
    out[..., 1:] = coeffs / np.arange(1, width + 1, dtype=float)
    return out


def pp_antiderivative(f, base=None):
    """
    Antiderivative vanishing at ``base``.

    Parameters
    ----------
    f : PiecewisePoly
        Integrand without a left tail.
    base : float or None
        Lower limit; ``None`` stands for minus infinity. Must not exceed the left end of
        the support, so the antiderivative is 0 left of the support.

    Returns
    -------
    PiecewisePoly
        ``F`` with ``F' = f`` on every piece. Right of the support ``F`` continues as a
        stored right tail (the constant total mass for compactly supported ``f``).

    Raises
    ------
    PreconditionError
        If ``f`` has a left tail or ``base`` lies inside the support.

    Examples
    --------
    >>> box = PiecewisePoly.single(0, 1, [1.0])
    >>> pp_eval(pp_antiderivative(box), [0.5, 1.0, 7.0]).tolist()
    [0.5, 1.0, 1.0]
    """
    if f.is_zero:
        return zero()
    if f.left_tail is not None:
        raise PreconditionError("antiderivative needs a function vanishing left of its breakpoints")
    start = f.bp_values[0]
    if base is not None and float(base) > start:
        raise PreconditionError("base lies inside the support", base=float(base), support_start=float(start))
    integrated = _integrate(f.pieces)
    widths = np.diff(f.bp_values)
    increments = _horner(integrated, widths)
    constants = np.concatenate(([0.0], np.cumsum(increments)))
    integrated[:, 0] = constants[:-1]
    total = constants[-1]
    if f.right_tail is not None:
        tail = _integrate(f.right_tail)
        tail[0] = total
    else:
        tail = np.array([total])
    return PiecewisePoly(f.breakpoints, integrated, None, tail)


def pp_integral(f):
    """Total integral of a compactly supported piecewise polynomial."""
    if f.is_zero:
        return 0.0
    if not f.is_compact:
        raise PreconditionError("integral over an unbounded support")
    widths = np.diff(f.bp_values)
    return math.fsum(_horner(_integrate(f.pieces), widths))


def _product_integral(a, b, h):
    # per-cell integral of (sum_j a_j u^j)(sum_k b_k u^k) over [0, h]
    values = np.zeros(h.shape, dtype=float)
    for j in range(a.shape[1]):
        if not np.any(a[:, j]):
            continue
        for k in range(b.shape[1]):
            e = j + k + 1
            values += a[:, j] * b[:, k] * h ** e / e
    return values


def pp_inner(f, g):
    """
    Exact ``integral f * g`` over the intersection of the supports.

    Parameters
    ----------
    f, g : PiecewisePoly
        Factors; at most one of them may extend to infinity on a given side.

    Returns
    -------
    float
        The inner product, accumulated with ``math.fsum`` over the merged pieces.

    Raises
    ------
    PreconditionError
        If the intersection of the supports is unbounded.

    Examples
    --------
    >>> hat = PiecewisePoly((0, 1, 2), [[0.0, 1.0], [1.0, -1.0]])
    >>> round(pp_inner(hat, hat), 12)
    0.666666666667
    """
    if f.is_zero or g.is_zero:
        return 0.0
    f_lo, f_hi = f.support
    g_lo, g_hi = g.support
    lo, hi = max(f_lo, g_lo), min(f_hi, g_hi)
    if math.isinf(lo) or math.isinf(hi):
        raise PreconditionError("inner product over an unbounded range")
    if lo >= hi:
        return 0.0
    lo_d, hi_d = to_dyadic(lo), to_dyadic(hi)
    grid = sorted({b for b in f.breakpoints + g.breakpoints if lo_d <= b <= hi_d} | {lo_d, hi_d})
    a = cell_coefficients(f, grid)
    b = cell_coefficients(g, grid)
    h = np.diff(np.array([float(x) for x in grid]))
    return math.fsum(_product_integral(a, b, h))


def pp_convolve_box(f):
    """
    Convolution with the unit box ``chi_[0,1)``: ``x -> integral_{x-1}^{x} f``.

    Degree rises by one and the support grows by one to the right.

    Examples
    --------
    >>> box = PiecewisePoly.single(0, 1, [1.0])
    >>> pp_eval(pp_convolve_box(box), 1.0)
    1.0
    """
    if f.is_zero:
        return zero()
    antiderivative = pp_antiderivative(f)
    return pp_combine([(1.0, antiderivative), (-1.0, pp_transform(antiderivative, shift=1))])


def to_json_dict(f):
    """JSON-ready document ``{breakpoints: [[num, log2den], ...], pieces: [[c0..ck], ...]}``."""
    doc = {
        "breakpoints": [dyadic_pair(b) for b in f.breakpoints],
        "pieces": [[float(c) for c in row] for row in f.pieces],
    }
    if f.left_tail is not None:
        doc["left_tail"] = [float(c) for c in f.left_tail]
    if f.right_tail is not None:
        doc["right_tail"] = [float(c) for c in f.right_tail]
    return doc


def from_json_dict(doc):
    """Inverse of :func:`to_json_dict`."""
    breakpoints = tuple(Fraction(num, 2 ** log2den) for num, log2den in doc["breakpoints"])
    if not breakpoints:
        return zero()
    return PiecewisePoly(breakpoints, doc["pieces"], doc.get("left_tail"), doc.get("right_tail"))


def dumps(f):
    return json.dumps(to_json_dict(f), sort_keys=True)

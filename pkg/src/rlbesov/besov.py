# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# besov.py
# Dyadic grids, wavelet coefficients and weighted Besov sequence norms
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from .errors import PreconditionError
from .piecewise import cell_coefficients, pp_transform
from .templates import COEFF_COLUMNS, LEVEL_PROFILE_COLUMNS, RL_WINDOW
from .wavelet import HALF_OFFSETS, SplineSystemSpec, euler_constants, system_elements
from .weights import condb_min_order, dyadic_masses, estimate_rw

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DyadicIndex:
    """Interval ``Q_{d tau}^<c> = [(tau+c)/2**d, (tau+c+1)/2**d]``."""

    d: int
    tau: int
    c: float = 0.0

    @property
    def interval(self):
        length = 2.0 ** (-self.d)
        return (self.tau + self.c) * length, (self.tau + self.c + 1) * length

    @property
    def length(self):
        return 2.0 ** (-self.d)


@dataclass
class SeqCoeffs:
    """
    Sparse coefficient array ``lambda_{d tau}``.

    ``windows[d] = (lo, hi)`` is the inclusive ``tau`` range computed at level ``d``;
    entries outside the windows are 0.
    """

    entries: dict = field(default_factory=dict)
    d_max: int = 0
    windows: dict = field(default_factory=dict)
    c: float = 0.0

    def level(self, d):
        """``(taus, values)`` of level ``d`` in increasing ``tau`` order."""
        taus = sorted(tau for (level, tau) in self.entries if level == d)
        return np.array(taus, dtype=int), np.array([self.entries[(d, tau)] for tau in taus], dtype=float)

    def levels(self):
        return sorted({d for d, _ in self.entries})

    def scaled(self, factor):
        return SeqCoeffs({key: factor * value for key, value in self.entries.items()}, self.d_max,
                         dict(self.windows), self.c)

    def to_frame(self):
        rows = [[d, tau, value] for (d, tau), value in sorted(self.entries.items())]
        return pd.DataFrame(rows, columns=COEFF_COLUMNS)

    def to_json_list(self):
        return [{"d": d, "tau": tau, "value": value} for (d, tau), value in sorted(self.entries.items())]


@dataclass(frozen=True)
class SpaceParams:
    """Parameters ``p``, ``q``, ``s`` and the weight of ``B^{s,w}_{pq}``."""

    p: float
    q: float
    s: float
    weight: object

    def __post_init__(self):
        if not self.p > 0.0:
            raise PreconditionError("p must be positive", p=self.p)
        if not self.q > 0.0:
            raise PreconditionError("q must lie in (0, inf]", q=self.q)

    @property
    def p_conjugate(self):
        if not self.p > 1.0:
            raise PreconditionError("criteria need p > 1", p=self.p)
        return self.p / (self.p - 1.0)


def _log2_denominator(f):
    return max((b.denominator.bit_length() - 1 for b in f.breakpoints), default=0)


def _body(f):
    if f.left_tail is not None and f.right_tail is not None:
        raise PreconditionError("coefficients need f vanishing on at least one side")
    return f.breakpoints[0], f.breakpoints[-1]


@dataclass(frozen=True)
class _Template:
    func: object
    lower: Fraction
    upper: Fraction
    step: Fraction      # translation of one tau unit
    log2_grid: int


def _templates(spec, d_max):
    phi_element, psi_element = system_elements(spec)
    templates = {0: _Template(phi_element.func, Fraction(phi_element.support[0]), Fraction(phi_element.support[1]),
                              Fraction(1), 1 if spec.a else 0)}
    lo, hi = Fraction(psi_element.support[0]), Fraction(psi_element.support[1])
    lambda_cap = euler_constants(spec.n).lambda_cap
    for d in range(1, d_max + 1):
        # 2**(d/2) * 2**((d-1)/2) * Psi(2**(d-1) x) / Lambda_n
        scale = 2.0 ** (d / 2.0) * 2.0 ** ((d - 1) / 2.0) / lambda_cap
        func = pp_transform(psi_element.func, scale=scale, dilation_log2=d - 1)
        step = Fraction(1, 2 ** (d - 1))
        templates[d] = _Template(func, lo * step, hi * step, step, d)
    return templates


def required_window(f, template, radius=RL_WINDOW, level=0):
    """
    Inclusive ``tau`` range whose template overlaps the body of ``f``.

    On a side where ``f`` has a polynomial tail, level 0 reaches ``radius`` past the body;
    wavelet levels stop at the body, their templates annihilate the tail polynomial.
    """
    body_lo, body_hi = _body(f)
    lo = body_lo - (radius if (f.left_tail is not None and level == 0) else 0)
    hi = body_hi + (radius if (f.right_tail is not None and level == 0) else 0)
    tau_lo = math.floor((lo - template.upper) / template.step) + 1
    tau_hi = math.ceil((hi - template.lower) / template.step) - 1
    return tau_lo, tau_hi


def _level_coefficients(f, template, tau_lo, tau_hi):
    if tau_hi < tau_lo:
        return np.zeros(0)
    log2_grid = max(template.log2_grid, _log2_denominator(f))
    h = Fraction(1, 2 ** log2_grid)
    start = template.lower + tau_lo * template.step
    stop = template.upper + tau_hi * template.step
    cells = int((stop - start) / h)
    grid = float(start) + float(h) * np.arange(cells + 1)
    f_cells = cell_coefficients(f, grid)
    t_grid = float(template.lower) + float(h) * np.arange(int((template.upper - template.lower) / h) + 1)
    t_cells = cell_coefficients(template.func, t_grid)
    width_f, width_t = f_cells.shape[1], t_cells.shape[1]
    hf = float(h)
    moments = np.array([[hf ** (a + b + 1) / (a + b + 1) for b in range(width_t)] for a in range(width_f)])
    paired = t_cells @ moments.T
    stride = int(template.step / h)
    windows = sliding_window_view(f_cells, t_cells.shape[0], axis=0)[::stride]
    return np.einsum("kam,ma->k", windows, paired)


def wavelet_coeffs(f, spec, d_max, windows=None, threads=None):
    """
    Wavelet coefficients ``lambda_{0 tau} = <f, Phi_tau>`` and
    ``lambda_{d tau} = 2**(d/2) <f, Psi_{(d-1) tau}>``, ``1 <= d <= d_max``, where the
    detail element is ``Psi = Psi_{n,a,s} / Lambda_n``.

    Parameters
    ----------
    f : PiecewisePoly
        Function; a polynomial tail on one side is allowed when its degree is at most
        ``n`` (RL images).
    spec : SplineSystemSpec
        Family of ``Phi = Phi_{n,a}`` and ``Psi`` (generalized wavelet).
    d_max : int
        Last level.
    windows : dict, optional
        ``{d: (tau_lo, tau_hi)}`` ranges to compute; each must cover the range the
        supports require.
    threads : int, optional
        Worker cap for the level loop.

    Returns
    -------
    SeqCoeffs

    Raises
    ------
    PreconditionError
        If a supplied window does not cover the required range.

    Notes
    -----
    1. ``f`` and each template are sampled cell by cell on a uniform dyadic grid fine
       enough for both; a coefficient is the pairing of a sliding window of ``f`` cells
       with the template cells through the exact cell moments ``h**(a+b+1)/(a+b+1)``.
    2. Coefficients outside the required range vanish exactly (disjoint supports, or a
       template inside a tail of degree at most ``n``).
    """
    if d_max < 0:
        raise PreconditionError("d_max must be non-negative", d_max=d_max)
    result = SeqCoeffs(d_max=d_max)
    if f.is_zero:
        return result
    for tail in (f.left_tail, f.right_tail):
        if tail is not None and len(np.trim_zeros(tail, "b")) - 1 > spec.n:
            raise PreconditionError("tail degree exceeds the vanishing moments of the wavelet", n=spec.n)
    templates = _templates(spec, d_max)
    ranges = {}
    for d, template in templates.items():
        required = required_window(f, template, level=d)
        given = (windows or {}).get(d)
        if given is not None:
            if required[0] <= required[1] and (given[0] > required[0] or given[1] < required[1]):
                raise PreconditionError("insufficient coefficient window", level=d, required=required,
                                        given=tuple(given))
            required = tuple(given)
        ranges[d] = required

    def compute(d):
        return _level_coefficients(f, templates[d], *ranges[d])

    with ThreadPoolExecutor(max_workers=threads) as pool:
        levels = list(pool.map(compute, range(d_max + 1)))
    for d, values in enumerate(levels):
        tau_lo, tau_hi = ranges[d]
        result.windows[d] = (tau_lo, tau_hi)
        for tau, value in zip(range(tau_lo, tau_hi + 1), values):
            result.entries[(d, tau)] = float(value)
    logger.info(f"Coefficients computed for levels 0..{d_max}")
    return result


def _level_sums(lam, sp):
    sums = {}
    for d in lam.levels():
        taus, values = lam.level(d)
        masses = dyadic_masses(sp.weight, max(d - 1, 0), taus, lam.c)
        sums[d] = math.fsum(np.abs(values) ** sp.p * masses)
    return sums


def _contributions(lam, sp):
    sums = _level_sums(lam, sp)
    first = sums.get(0, 0.0) ** (1.0 / sp.p)
    levels = {d: 2.0 ** (d * sp.s) * value ** (1.0 / sp.p) for d, value in sums.items() if d >= 1}
    return first, levels


def seq_norm(lam, sp):
    """
    Sequence norm of ``b^s_{pq}(w)``.

    ``(sum_tau |l_{0 tau}|**p w(Q_{0 tau}))**(1/p)
    + (sum_{d>=1} 2**(q d s) (sum_tau |l_{d tau}|**p w(Q_{(d-1) tau}))**(q/p))**(1/q)``,
    with the supremum over ``d >= 1`` for ``q = inf``.

    Examples
    --------
    >>> from src.rlbesov.weights import constant_weight
    >>> lam = SeqCoeffs({(0, 0): 1.0, (1, 0): 1.0}, d_max=1)
    >>> seq_norm(lam, SpaceParams(2.0, 2.0, 1.0, constant_weight()))
    3.0
    """
    first, levels = _contributions(lam, sp)
    if not levels:
        return first
    values = np.array(list(levels.values()))
    if math.isinf(sp.q):
        return first + float(values.max())
    return first + math.fsum(values ** sp.q) ** (1.0 / sp.q)


def level_profile(lam, sp):
    """Per-level contributions as a table with ``LEVEL_PROFILE_COLUMNS``."""
    first, levels = _contributions(lam, sp)
    rows = []
    for d in range(lam.d_max + 1):
        _, values = lam.level(d)
        contribution = first if d == 0 else levels.get(d, 0.0)
        rows.append([d, contribution, int(np.count_nonzero(values)),
                     float(np.max(np.abs(values))) if values.size else 0.0])
    return pd.DataFrame(rows, columns=LEVEL_PROFILE_COLUMNS)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    coeffs: SeqCoeffs
    profile: pd.DataFrame
    tail_ratio: float
    n: int
    rw: float

    def as_dict(self):
        return {"value": self.value, "tail_ratio": self.tail_ratio, "n": self.n, "rw": self.rw,
                "d_max": self.coeffs.d_max}


def check_condb(n, sp, rw):
    """Rejects ``n`` below the smallest admissible spline order for ``sp``."""
    n_min = condb_min_order(sp.s, sp.p, rw)
    if n < n_min:
        raise PreconditionError("spline order too small for the space", n=n, minimal_n=n_min, s=sp.s, p=sp.p,
                                rw=rw)
    return n_min


def _resolve_rw(sp, rw):
    if rw is not None:
        return rw
    _, hi = estimate_rw(sp.weight)
    if math.isinf(hi):
        raise PreconditionError("weight shows no local Muckenhoupt index", weight=sp.weight.describe())
    return hi


def besov_norm_estimate(f, sp, n, d_max, spec=None, rw=None, threads=None):
    """
    Besov norm of ``f`` through its wavelet coefficients.

    Parameters
    ----------
    f : PiecewisePoly
        Function.
    sp : SpaceParams
        Target space.
    n : int
        Spline order of the wavelet family.
    d_max : int
        Last level, ``d_max >= 1``.
    spec : SplineSystemSpec, optional
        Family; defaults to ``SplineSystemSpec(n)``.
    rw : float, optional
        Upper end of the ``r_w`` bracket; estimated from the weight when omitted.
    threads : int, optional
        Worker cap.

    Returns
    -------
    NormEstimate
        Sequence norm, coefficients, level profile and the tail ratio
        (contribution of level ``d_max`` over the total).

    Raises
    ------
    PreconditionError
        If ``n`` violates the order condition; the minimal order is in the details.
    """
    if d_max < 1:
        raise PreconditionError("d_max must be at least 1", d_max=d_max)
    rw = _resolve_rw(sp, rw)
    check_condb(n, sp, rw)
    spec = spec or SplineSystemSpec(n)
    if spec.n != n:
        raise PreconditionError("family order differs from n", n=n, family_n=spec.n)
    lam = wavelet_coeffs(f, spec, d_max, threads=threads)
    value = seq_norm(lam, sp)
    profile = level_profile(lam, sp)
    last = float(profile["Contribution"].iloc[-1])
    tail_ratio = last / value if value > 0.0 else 0.0
    return NormEstimate(value, lam, profile, tail_ratio, n, rw)


def offset_sum_norm(f, sp, n, d_max, rw=None, threads=None, **family):
    """Sum over the origins ``a = 0, 1/2, -1/2`` of the sequence norms."""
    rw = _resolve_rw(sp, rw)
    total = 0.0
    for a in HALF_OFFSETS:
        spec = SplineSystemSpec(n, a=a, **family)
        total += besov_norm_estimate(f, sp, n, d_max, spec=spec, rw=rw, threads=threads).value
    return total

# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# harness.py
# Extremal test functions, empirical best constants and the criteria-vs-empirics verdicts
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
import pandas as pd

from .besov import SpaceParams, besov_norm_estimate
from .bspline import bspline, bspline_gram, difference_coeffs, spline_series
from .criteria import CriterionReport, Truncation, criterion_full_line, criterion_half_line, criterion_lower
from .errors import PreconditionError
from .piecewise import pp_combine, pp_transform, to_dyadic
from .rliouville import LEFT, RIGHT, RLSpec, rl_apply
from .templates import (DEFAULT_SEED, EXTREMAL_R, FAIL, FAMILY_SIZE, HARNESS_D_MAX, HARNESS_WINDOW, K_HI, K_LO,
                        MAX_ORDER, MEMBER_RATIO_COLUMNS, PASS, RANDOM_MAX_LEVEL, RANDOM_TERMS, RW_SCAN_D_MAX,
                        RW_SCAN_TAU_SPAN, SUPPORT_ATOL, TAIL_SLACK)
from .wavelet import SplineSystemSpec, euler_constants, generalized_psi, single_overlap_offset
from .weights import MuckenhouptScan, condb_min_order, dyadic_masses, estimate_rw, power_weight

logger = logging.getLogger(__name__)

FSTAR = "fstar"
GSTAR = "gstar"
HSTAR = "hstar"
RANDOM_COMBO = "random_combo"
FAMILY_KINDS = (FSTAR, GSTAR, HSTAR, RANDOM_COMBO)

FORWARD = "forward"
REVERSE = "reverse"
EXAMPLE_EX1 = "example-ex1"
VERIFY_KINDS = (FORWARD, REVERSE, EXAMPLE_EX1)


@dataclass(frozen=True, eq=False)
class TestFamily:
    """Test functions of one kind together with the parameters that produced them."""

    __test__ = False

    kind: str
    members: tuple
    labels: tuple
    params: dict = field(default_factory=dict)
    seed: int = None

    def __len__(self):
        return len(self.members)

    def merged(self, other):
        """Both families as one, labels kept."""
        return TestFamily("mixed", self.members + other.members, self.labels + other.labels,
                          {self.kind: self.params, other.kind: other.params},
                          self.seed if self.seed is not None else other.seed)


def _conjugate(p):
    if not p > 1.0:
        raise PreconditionError("test functions need p > 1", p=p)
    return p / (p - 1.0)


def _check_order(m_star, extra=0):
    if m_star < 1 or m_star + extra > MAX_ORDER:
        raise PreconditionError("spline order out of range", m_star=m_star, max_order=MAX_ORDER)


def _fstar(R, nu, m_star, alpha, p, v):
    # f*_R(y) = sum_{-R <= tau <= nu} (nu-tau+1)**((alpha-1)(p'-1)) v(Q_0tau)**(1-p') B(y - tau + alpha)
    _check_order(m_star)
    if R + nu < 0:
        raise PreconditionError("fstar needs -R <= nu", R=R, nu=nu)
    p_conj = _conjugate(p)
    taus = nu - np.arange(R + nu + 1)
    masses = dyadic_masses(v, 0, taus)
    if np.any(~np.isfinite(masses)) or np.any(masses <= 0.0):
        raise PreconditionError("fstar needs finite positive masses v(Q_0tau)", weight=v.describe())
    coeffs = (nu - taus + 1.0) ** ((alpha - 1) * (p_conj - 1.0)) * masses ** (1.0 - p_conj)
    return spline_series(m_star, coeffs, alpha - nu)


def _gstar(R, nu, m_star, alpha, p, u):
    # g*_R(y) = sum_{nu <= tau <= R} (tau-nu+1)**((alpha-1)(p-1)) u(Q_0tau) B(y - tau + alpha)
    _check_order(m_star)
    if R < nu:
        raise PreconditionError("gstar needs nu <= R", R=R, nu=nu)
    taus = R - np.arange(R - nu + 1)
    masses = dyadic_masses(u, 0, taus)
    if np.any(~np.isfinite(masses)):
        raise PreconditionError("gstar needs finite masses u(Q_0tau)", weight=u.describe())
    coeffs = (taus - nu + 1.0) ** ((alpha - 1) * (p - 1.0)) * masses
    return spline_series(m_star, coeffs, alpha - R)


def _hstar_offsets(m_star, alpha, a_bar, s_bar):
    if a_bar is None or s_bar is None:
        default_a, default_s = single_overlap_offset(m_star + alpha, m_star)
        a_bar = default_a if a_bar is None else a_bar
        s_bar = default_s if s_bar is None else s_bar
    return Fraction(a_bar), int(s_bar)


def _hstar(d0, tau0, m_star, alpha, a_bar=None, s_bar=None):
    # h*(y) = Lambda_{m*}**-1 Psi_{m*, a_bar, s_bar; n*(1), alpha(1)}(2**(d0-1) y - tau0), n* = m* + alpha
    _check_order(m_star, 2 * alpha)
    if d0 < 1:
        raise PreconditionError("hstar needs d0 >= 1", d0=d0)
    a_bar, s_bar = _hstar_offsets(m_star, alpha, a_bar, s_bar)
    spec = SplineSystemSpec(m_star, a=a_bar, s=s_bar, m=m_star + alpha, k_flag=1, zeta_flag=1, alpha=alpha)
    element = generalized_psi(spec)
    scale = 1.0 / euler_constants(m_star).lambda_cap
    return pp_transform(element.func, scale=scale, shift=tau0, dilation_log2=d0 - 1)


def _random_combo(seed, index, order, window, terms=RANDOM_TERMS, max_level=RANDOM_MAX_LEVEL):
    _check_order(order)
    lo, hi = (to_dyadic(x) for x in window)
    rng = np.random.default_rng([int(seed), int(index)])
    picked = []
    for _ in range(int(rng.integers(1, terms + 1))):
        j = int(rng.integers(0, max_level + 1))
        first = math.ceil(lo * 2 ** j)
        last = math.floor(hi * 2 ** j) - order - 1
        if last < first:
            raise PreconditionError("window too short for the spline order", window=[str(lo), str(hi)], order=order)
        k = int(rng.integers(first, last + 1))
        picked.append((float(rng.normal()), pp_transform(bspline(order), shift=k, dilation_log2=j)))
    return pp_combine(picked)


def make_test_function(kind, **params):
    """
    One extremal or random test function.

    Parameters
    ----------
    kind : {"fstar", "gstar", "hstar", "random_combo"}
        Family of the function.
    **params
        ``fstar``: ``R, nu, m_star, alpha, p, v``; ``gstar``: ``R, nu, m_star, alpha, p, u``;
        ``hstar``: ``d0, tau0, m_star, alpha`` and optionally ``a_bar, s_bar``;
        ``random_combo``: ``seed, index, order, window`` and optionally ``terms, max_level``.

    Returns
    -------
    PiecewisePoly
        Exact, compactly supported.

    Raises
    ------
    PreconditionError
        If the kind is unknown or a parameter is out of range.

    Notes
    -----
    1. ``f*_R`` carries the coefficients ``(nu-tau+1)**((alpha-1)(p'-1)) v(Q_0tau)**(1-p')``
       against ``B_{m*}(. - tau + alpha)``, ``-R <= tau <= nu``; it is nonnegative.
    2. ``h*`` is ``Lambda_{m*}**-1 Psi_{m*,a,s;n*(1),alpha(1)}(2**(d0-1) . - tau0)`` with
       ``n* = m* + alpha``; the ``2 alpha``-difference factor makes its image under the
       left operator compactly supported. The offsets default to the single-overlap split.
    3. A random member draws up to ``terms`` B-splines ``B_order(2**j . - k)`` inside
       ``window`` with standard normal coefficients from the generator seeded by
       ``(seed, index)``.
    """
    try:
        if kind == FSTAR:
            return _fstar(params["R"], params["nu"], params["m_star"], params["alpha"], params["p"], params["v"])
        if kind == GSTAR:
            return _gstar(params["R"], params["nu"], params["m_star"], params["alpha"], params["p"], params["u"])
        if kind == HSTAR:
            return _hstar(params["d0"], params["tau0"], params["m_star"], params["alpha"],
                          params.get("a_bar"), params.get("s_bar"))
        if kind == RANDOM_COMBO:
            return _random_combo(params["seed"], params.get("index", 0), params["order"], params["window"],
                                 params.get("terms", RANDOM_TERMS), params.get("max_level", RANDOM_MAX_LEVEL))
    except KeyError as e:
        raise PreconditionError("missing test function parameter", kind=kind, parameter=e.args[0]) from e
    raise PreconditionError("unknown test function kind", kind=kind, known=FAMILY_KINDS)


def _as_list(value):
    if isinstance(value, (list, tuple, range, np.ndarray)):
        return list(value)
    return [value]


def make_family(kind, count=FAMILY_SIZE, seed=DEFAULT_SEED, **params):
    """
    Family of test functions.

    ``random_combo`` draws ``count`` members; the extremal kinds take one member for every
    combination of the list-valued parameters (``R`` and ``nu``, or ``d0`` and ``tau0``).

    Examples
    --------
    >>> family = make_family("random_combo", count=4, order=2, window=(0, 8))
    >>> len(family), family.labels[0]
    (4, 'random_combo[0]')
    """
    if kind == RANDOM_COMBO:
        members = [make_test_function(kind, seed=seed, index=i, **params) for i in range(count)]
        labels = [f"{kind}[{i}]" for i in range(count)]
        return TestFamily(kind, tuple(members), tuple(labels), dict(params), seed)
    grid_keys = {FSTAR: ("R", "nu"), GSTAR: ("R", "nu"), HSTAR: ("d0", "tau0")}.get(kind)
    if grid_keys is None:
        raise PreconditionError("unknown test function kind", kind=kind, known=FAMILY_KINDS)
    members, labels = [], []
    for values in itertools.product(*(_as_list(params[key]) for key in grid_keys)):
        chosen = dict(zip(grid_keys, values))
        members.append(make_test_function(kind, **{**params, **chosen}))
        labels.append(kind + "(" + ", ".join(f"{key}={value}" for key, value in chosen.items()) + ")")
    return TestFamily(kind, tuple(members), tuple(labels), dict(params))


def numerical_support(f, atol=SUPPORT_ATOL):
    """
    Support of ``f`` ignoring pieces and tails whose coefficients are rounding residue.

    Returns
    -------
    tuple or None
        ``(lower, upper)`` as Fractions (``-inf``/``inf`` floats on sides with a genuine
        tail), ``None`` when nothing survives.
    """
    if f.is_zero:
        return None
    blocks = [np.abs(f.pieces)] + [np.abs(t) for t in (f.left_tail, f.right_tail) if t is not None]
    scale = max(float(np.max(block)) for block in blocks if block.size)
    if scale == 0.0:
        return None
    keep = np.nonzero(np.max(np.abs(f.pieces), axis=1) > atol * scale)[0]
    left = f.left_tail is not None and float(np.max(np.abs(f.left_tail))) > atol * scale
    right = f.right_tail is not None and float(np.max(np.abs(f.right_tail))) > atol * scale
    if not keep.size and not left and not right:
        return None
    lower = -math.inf if left else (f.breakpoints[int(keep[0])] if keep.size else f.breakpoints[-1])
    upper = math.inf if right else (f.breakpoints[int(keep[-1]) + 1] if keep.size else f.breakpoints[0])
    return lower, upper


def hstar_image_support(d0, tau0, m_star, alpha, a_bar=None, s_bar=None):
    """
    Quoted support ``[(2(tau0+s+a) - 2n* - m*)/2**d0, (2(tau0+s+a) + 2n* + m* + 2)/2**d0]``
    of the image of ``h*`` under the left operator, ``n* = m* + alpha``.

    Examples
    --------
    >>> hstar_image_support(1, 0, 1, 1, a_bar=0, s_bar=0)
    (Fraction(-5, 2), Fraction(7, 2))
    """
    a_bar, s_bar = _hstar_offsets(m_star, alpha, a_bar, s_bar)
    n_star = m_star + alpha
    centre = 2 * (tau0 + s_bar + a_bar)
    scale = Fraction(1, 2 ** d0)
    return (centre - 2 * n_star - m_star) * scale, (centre + 2 * n_star + m_star + 2) * scale


def fstar_witness_ratio(R, nu, m_star, alpha, p, v):
    """
    Lower-bound route of the necessity proof for ``f*_R``.

    The pairing ``sum_{l <= nu} A_{nu-l}(alpha) <f*_R, B_{m*}(. - l + alpha)>`` divided by the
    witness sum ``sum_{-R <= tau <= nu} (nu-tau+1)**((alpha-1)p') v(Q_0tau)**(1-p')``.

    Returns
    -------
    float
        The ratio. Nonnegative coefficients and ``sum_k <B, B(. - k)> = 1`` bound it below
        by ``1 / (2 (alpha-1)!)`` whatever ``R`` and ``nu`` are.
    """
    _check_order(m_star)
    p_conj = _conjugate(p)
    taus = nu - np.arange(R + nu + 1)
    masses = dyadic_masses(v, 0, taus)
    coeffs = (nu - taus + 1.0) ** ((alpha - 1) * (p_conj - 1.0)) * masses ** (1.0 - p_conj)
    witness = float(np.sum((nu - taus + 1.0) ** ((alpha - 1) * p_conj) * masses ** (1.0 - p_conj)))
    first = -R - m_star
    diffs = difference_coeffs(alpha, nu - first).values
    gram = {k: bspline_gram(m_star, k) for k in range(-m_star, m_star + 1)}
    pairing = 0.0
    for l in range(first, nu + 1):
        inner = sum(c * gram.get(int(tau) - l, 0.0) for tau, c in zip(taus, coeffs))
        pairing += diffs[nu - l] * inner
    return pairing / witness


@dataclass(frozen=True)
class EmpiricalConstant:
    value: float
    member: str
    table: pd.DataFrame
    direction: str
    skipped: int
    n_in: int
    n_out: int
    d_max: int

    def as_dict(self):
        return {"value": self.value, "member": self.member, "direction": self.direction, "skipped": self.skipped,
                "n_in": self.n_in, "n_out": self.n_out, "d_max": self.d_max}


def _rl_side(side):
    return LEFT if side in ("+", LEFT) else RIGHT


def _scan_rw(weight):
    _, hi = estimate_rw(weight, MuckenhouptScan(d_max=RW_SCAN_D_MAX, tau_span=RW_SCAN_TAU_SPAN))
    if math.isinf(hi):
        raise PreconditionError("weight shows no local Muckenhoupt index", weight=weight.describe())
    return hi


def _admissible_order(n, spec, rw, name):
    minimal = condb_min_order(spec.s, spec.p, rw)
    if n is None:
        return minimal
    if n < minimal:
        raise PreconditionError(f"{name} violates the order condition", **{name: n}, minimal_n=minimal, s=spec.s)
    return n


def empirical_constant(alpha, spec_in, spec_out, family, side="+", c=None, n_in=None, n_out=None,
                       d_max=HARNESS_D_MAX, direction=FORWARD, rw_in=None, rw_out=None, threads=None):
    """
    Largest norm ratio over a family of test functions.

    Parameters
    ----------
    alpha : int
        Operator order.
    spec_in, spec_out : SpaceParams
        Spaces of ``f`` and of its image.
    family : TestFamily
        Nonempty.
    side : {"+", "-"}
        Operator side.
    c : float, optional
        Origin of the half-line operator; ``None`` for the whole line.
    n_in, n_out : int, optional
        Spline orders of the two norm estimates; the smallest admissible ones by default.
    d_max : int
        Last wavelet level.
    direction : {"forward", "reverse"}
        ``|I f|_out / |f|_in`` or ``|f|_in / |I f|_out``.
    rw_in, rw_out : float, optional
        Muckenhoupt indices; estimated with a reduced scan when omitted.
    threads : int, optional
        Worker cap; members are evaluated concurrently and merged in member order.

    Returns
    -------
    EmpiricalConstant
        The maximal ratio, the maximizing member and a table with one row per member
        (columns ``MEMBER_RATIO_COLUMNS``).

    Raises
    ------
    PreconditionError
        If the family is empty, no member has a nonzero denominator or an order
        violates the order condition.
    """
    if direction not in (FORWARD, REVERSE):
        raise PreconditionError("direction must be 'forward' or 'reverse'", direction=direction)
    if not len(family):
        raise PreconditionError("test family is empty")
    rw_in = rw_in if rw_in is not None else _scan_rw(spec_in.weight)
    rw_out = rw_out if rw_out is not None else _scan_rw(spec_out.weight)
    n_in = _admissible_order(n_in, spec_in, rw_in, "n_in")
    n_out = _admissible_order(n_out, spec_out, rw_out, "n_out")
    operator = RLSpec(alpha, _rl_side(side), c)

    def measure(f):
        image = rl_apply(operator, f)
        norm_in = besov_norm_estimate(f, spec_in, n_in, d_max, rw=rw_in, threads=1).value
        norm_out = besov_norm_estimate(image, spec_out, n_out, d_max, rw=rw_out, threads=1).value
        return (norm_out, norm_in) if direction == FORWARD else (norm_in, norm_out)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        measured = list(pool.map(measure, family.members))
    rows = []
    best, best_label, skipped = -math.inf, None, 0
    for label, (numerator, denominator) in zip(family.labels, measured):
        if denominator == 0.0:
            skipped += 1
            rows.append([label, numerator, denominator, math.nan, "zero denominator"])
            continue
        ratio = numerator / denominator
        rows.append([label, numerator, denominator, ratio, ""])
        if ratio > best:
            best, best_label = ratio, label
    if best_label is None:
        raise PreconditionError("no member of the family has a nonzero denominator", members=len(family))
    if skipped:
        logger.warning(f"Warning! {skipped} member(s) skipped with a zero denominator")
    logger.info(f"Empirical {direction} constant {best:g} reached by {best_label}")
    table = pd.DataFrame(rows, columns=MEMBER_RATIO_COLUMNS)
    return EmpiricalConstant(best, best_label, table, direction, skipped, n_in, n_out, d_max)


@dataclass(frozen=True)
class Comparison:
    verdict: str
    criterion: float
    empirical: float
    k_lo: float
    k_hi: float
    tail_slack: float
    reason: str

    def as_dict(self):
        return dict(self.__dict__)


def compare(report, empirical, k_lo=K_LO, k_hi=K_HI, tail_slack=TAIL_SLACK):
    """
    Verdict of the equivalence between a criterion and an empirical constant.

    PASS when ``empirical <= k_hi * criterion`` and ``criterion <= k_lo * (empirical + tail_slack)``,
    or when both are infinite.

    Examples
    --------
    >>> compare(1.0, 1.0).verdict
    'PASS'
    >>> compare(1.0, 100.0).verdict
    'FAIL'
    """
    criterion = float(report.aggregate if isinstance(report, CriterionReport) else report)
    empirical = float(getattr(empirical, "value", empirical))
    if math.isinf(criterion) and math.isinf(empirical):
        return Comparison(PASS, criterion, empirical, k_lo, k_hi, tail_slack, "both infinite")
    if math.isinf(criterion) or math.isinf(empirical):
        return Comparison(FAIL, criterion, empirical, k_lo, k_hi, tail_slack, "exactly one side is infinite")
    if empirical > k_hi * criterion:
        return Comparison(FAIL, criterion, empirical, k_lo, k_hi, tail_slack,
                          f"empirical {empirical:g} above {k_hi:g} x criterion {criterion:g}")
    if criterion > k_lo * (empirical + tail_slack):
        return Comparison(FAIL, criterion, empirical, k_lo, k_hi, tail_slack,
                          f"criterion {criterion:g} above {k_lo:g} x empirical {empirical:g}")
    return Comparison(PASS, criterion, empirical, k_lo, k_hi, tail_slack, "within the equivalence constants")


@dataclass(frozen=True)
class VerifySetup:
    """
    Everything a verification run needs.

    ``v`` is the input weight of the forward inequality, ``w`` the weight of ``f`` in the
    reverse one; ``c=None`` means the whole line. Forward measures ``f`` with smoothness
    ``s + kappa - alpha``, reverse with ``s - kappa - alpha``; ``I f`` always with ``s``.
    """

    p: float = 2.0
    q: float = 2.0
    s: float = 2.0
    alpha: int = 1
    kappa: float = 0.0
    u: object = None
    v: object = None
    w: object = None
    c: float = None
    side: str = "+"
    n_in: int = None
    n_out: int = None
    d_max: int = HARNESS_D_MAX
    family_size: int = FAMILY_SIZE
    seed: int = DEFAULT_SEED
    order: int = 2
    trunc: Truncation = None
    k_lo: float = K_LO
    k_hi: float = K_HI
    tail_slack: float = TAIL_SLACK
    threads: int = None


@dataclass(frozen=True)
class VerifyReport:
    kind: str
    verdict: str
    seed: int
    criterion: CriterionReport = None
    empirical: EmpiricalConstant = None
    comparison: Comparison = None
    parts: tuple = ()

    def as_dict(self):
        doc = {"kind": self.kind, "verdict": self.verdict, "seed": self.seed}
        if self.criterion is not None:
            doc["criterion"] = self.criterion.as_dict()
        if self.empirical is not None:
            doc["empirical"] = self.empirical.as_dict()
        if self.comparison is not None:
            doc["comparison"] = self.comparison.as_dict()
        if self.parts:
            doc["parts"] = [part.as_dict() for part in self.parts]
        return doc


def _window(setup):
    if setup.c is None:
        return -HARNESS_WINDOW // 2, HARNESS_WINDOW // 2
    if setup.side == "+":
        return setup.c, setup.c + HARNESS_WINDOW
    return setup.c - HARNESS_WINDOW, setup.c


def _inside(f, setup):
    # integer translation moving the support to the admissible side of c
    if setup.c is None:
        return f
    lower, upper = f.support
    if setup.side == "+" and lower < setup.c:
        return pp_transform(f, shift=math.ceil(setup.c - lower))
    if setup.side == "-" and upper > setup.c:
        return pp_transform(f, shift=-math.ceil(upper - setup.c))
    return f


def verification_family(setup, direction):
    """Random members in the admissible window plus the extremal members of the direction."""
    family = make_family(RANDOM_COMBO, count=setup.family_size, seed=setup.seed, order=setup.order,
                         window=_window(setup))
    if direction == FORWARD:
        extremal = make_family(FSTAR, R=list(EXTREMAL_R), nu=0, m_star=setup.order, alpha=setup.alpha, p=setup.p,
                               v=setup.v)
    else:
        extremal = make_family(GSTAR, R=list(EXTREMAL_R), nu=0, m_star=setup.order, alpha=setup.alpha, p=setup.p,
                               u=setup.u)
    extremal = replace(extremal, members=tuple(_inside(f, setup) for f in extremal.members))
    return family.merged(extremal)


def _criterion(setup, direction):
    if direction == FORWARD:
        if setup.c is None:
            return criterion_full_line(setup.alpha, setup.kappa, setup.p, setup.u, setup.v, setup.trunc, setup.side,
                                       setup.threads)
        return criterion_half_line(setup.alpha, setup.kappa, setup.c, setup.side, setup.p,
                                   {"u": setup.u, "v": setup.v}, setup.trunc, "upper", setup.threads)
    if setup.c is None:
        return criterion_lower(setup.alpha, setup.kappa, setup.p, setup.u, setup.w, setup.trunc, setup.side,
                               setup.threads)
    return criterion_half_line(setup.alpha, setup.kappa, setup.c, setup.side, setup.p,
                               {"u": setup.u, "w": setup.w}, setup.trunc, "lower", setup.threads)


def _verify_direction(setup, direction):
    needed = ("u", "v") if direction == FORWARD else ("u", "w")
    missing = [key for key in needed if getattr(setup, key) is None]
    if missing:
        raise PreconditionError(f"{direction} verification is missing weights", missing=missing)
    if direction == FORWARD:
        spec_in = SpaceParams(setup.p, setup.q, setup.s + setup.kappa - setup.alpha, setup.v)
    else:
        spec_in = SpaceParams(setup.p, setup.q, setup.s - setup.kappa - setup.alpha, setup.w)
    spec_out = SpaceParams(setup.p, setup.q, setup.s, setup.u)
    report = _criterion(setup, direction)
    family = verification_family(setup, direction)
    empirical = empirical_constant(setup.alpha, spec_in, spec_out, family, setup.side, setup.c, setup.n_in,
                                   setup.n_out, setup.d_max, direction, threads=setup.threads)
    comparison = compare(report, empirical, setup.k_lo, setup.k_hi, setup.tail_slack)
    logger.info(f"Verification {direction}: {comparison.verdict} ({comparison.reason})")
    return VerifyReport(direction, comparison.verdict, setup.seed, report, empirical, comparison)


def example_ex1_setup(p=2.0, alpha=1, s=2.0, t=3.0, **overrides):
    """
    Worked half-line configuration: ``u = w = (1+|x|)**-t``, ``v = (1+|x|)**(sp-t)``, ``c = 0``.
    """
    u = power_weight(t)
    v = power_weight(t, delta=s * p)
    return VerifySetup(**{"p": p, "q": p, "s": s, "alpha": alpha, "u": u, "v": v, "w": u, "c": 0.0, **overrides})


def verify(kind, config):
    """
    Runs criteria and empirical constants and compares them.

    Parameters
    ----------
    kind : {"forward", "reverse", "example-ex1"}
        ``example-ex1`` runs both directions of the worked configuration ``config``.
    config : VerifySetup

    Returns
    -------
    VerifyReport
        PASS only if every compared pair passes.
    """
    if kind == EXAMPLE_EX1:
        parts = tuple(_verify_direction(config, direction) for direction in (FORWARD, REVERSE))
        verdict = PASS if all(part.verdict == PASS for part in parts) else FAIL
        return VerifyReport(kind, verdict, config.seed, parts=parts)
    if kind not in VERIFY_KINDS:
        raise PreconditionError("unknown verification kind", kind=kind, known=VERIFY_KINDS)
    return _verify_direction(config, kind)

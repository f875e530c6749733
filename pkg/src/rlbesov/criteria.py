# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# criteria.py
# Discrete weighted functionals of the boundedness criteria, their aggregates and truncation diagnostics
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd
from scipy.integrate import quad
from scipy.special import logsumexp

from .errors import PreconditionError
from .templates import (CHUNK_CELLS, CONVERGED, CONVERGENCE_REL, D_MAX, D_PROFILE_COLUMNS, DIVERGENCE_RATIO, DIVERGING,
                        EPSILON_GRID, FUNCTIONAL_COLUMNS, GROWTH_PERSISTENCE, HOMOGENEITY_COLUMNS, INCONCLUSIVE,
                        QUAD_LIMIT, QUAD_REL_TOL, SERIES_WINDOW, TAU_WINDOW, USL_FACTOR)
from .weights import dyadic_log_masses, dyadic_masses

logger = logging.getLogger(__name__)

M_BOLD = "M_bold"
M_SCRIPT = "M_script"
M_PLAIN = "M_plain"
M_BB = "M_bb"
FRAK = "frak"
FAMILIES = (M_BOLD, M_SCRIPT, M_PLAIN, M_BB, FRAK)
LEVEL_FAMILIES = (M_SCRIPT, M_BB, FRAK)

_VERDICT_RANK = {CONVERGED: 0, INCONCLUSIVE: 1, DIVERGING: 2}
_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class Truncation:
    """Windows of every scan: ``|tau| <= tau_window``, ``series_window`` terms per series, ``d <= d_max``."""

    tau_window: int = TAU_WINDOW
    series_window: int = SERIES_WINDOW
    d_max: int = D_MAX

    def __post_init__(self):
        if self.tau_window < 1 or self.series_window < 4 or self.d_max < 1:
            raise PreconditionError("empty truncation window", tau_window=self.tau_window,
                                    series_window=self.series_window, d_max=self.d_max)

    def doubled(self):
        """Both tau and series windows doubled; the level range is kept."""
        return replace(self, tau_window=2 * self.tau_window, series_window=2 * self.series_window)

    def as_dict(self):
        return {"tau_window": self.tau_window, "series_window": self.series_window, "d_max": self.d_max}


@dataclass(frozen=True)
class FunctionalSpec:
    """
    One functional of the criteria.

    ``weights`` is the ordered pair the family expects: ``(u, v)`` for ``M_bold`` and
    ``M_script``, ``(w, u)`` for ``M_plain`` and ``M_bb``, ``(sigma1, sigma2)`` for
    ``frak``. ``halfline`` set to ``c`` selects the tilde variant: ``tau`` runs over
    ``+-N_0``, intervals are ``Q^<c>`` and the inner dual sum of ``M_bold``/``M_script``
    stops at ``r = 0``.
    """

    family: str
    weights: tuple
    side: str = "+"
    theta: int = 1
    epsilon: float = 0.0
    d: int = 0
    kappa: float = 0.0
    p: float = 2.0
    halfline: float = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise PreconditionError("unknown functional family", family=self.family, known=FAMILIES)
        if self.side not in ("+", "-"):
            raise PreconditionError("side must be '+' or '-'", side=self.side)
        if not 0.0 <= self.epsilon <= 1.0:
            raise PreconditionError("epsilon must lie in [0, 1]", epsilon=self.epsilon)
        if not self.p > 1.0:
            raise PreconditionError("criteria need p > 1", p=self.p)
        if len(self.weights) != 2:
            raise PreconditionError("a functional takes an ordered pair of weights", count=len(self.weights))
        if int(self.theta) != self.theta or self.theta < 1:
            raise PreconditionError("theta must be a natural number", theta=self.theta)
        minimal_d = 1 if self.family in (M_SCRIPT, M_BB) else 0
        if int(self.d) != self.d or self.d < minimal_d:
            raise PreconditionError("level below the family's range", family=self.family, d=self.d,
                                    minimal=minimal_d)

    @property
    def p_conjugate(self):
        return self.p / (self.p - 1.0)

    @property
    def tilde(self):
        return self.halfline is not None

    @property
    def name(self):
        prefix = "~" if self.tilde else ""
        c = f", c={self.halfline:g}" if self.tilde else ""
        if self.family == FRAK:
            return f"{prefix}frak{self.side}(d={self.d}, kappa={self.kappa:g}{c})"
        level = f"d={self.d}, kappa={self.kappa:g}, " if self.family in LEVEL_FAMILIES else ""
        return f"{prefix}{self.family}{self.side}^{self.theta}({level}eps={self.epsilon:g}{c})"


@dataclass(frozen=True)
class FunctionalResult:
    name: str
    value: float
    tau_star: int
    d_star: int
    tau_window: int
    series_window: int
    tail_ratio: float
    verdict: str
    check_value: float = math.nan
    warnings: tuple = ()

    def as_row(self):
        return [self.name, self.value, self.tau_star, self.d_star, self.tau_window, self.series_window,
                self.tail_ratio, self.verdict]

    def as_dict(self):
        return {"functional": self.name, "value": self.value, "tau_star": self.tau_star, "d_star": self.d_star,
                "windows": {"tau_window": self.tau_window, "series_window": self.series_window},
                "tail_ratio": self.tail_ratio, "verdict": self.verdict}


@dataclass(frozen=True)
class CriterionReport:
    """
    Components, aggregate constant and verdict of one criterion.

    ``aggregate`` combines the component values in the order the criterion lists them;
    ``profiles`` holds the per-level tables of every sup over ``d``.
    """

    criterion: str
    params: dict
    components: tuple
    aggregate: float
    aggregate_check: float
    verdict: str
    windows: Truncation
    minimizers: dict = field(default_factory=dict)
    profiles: dict = field(default_factory=dict)
    warnings: tuple = ()

    def as_frame(self):
        return pd.DataFrame([c.as_row() for c in self.components], columns=FUNCTIONAL_COLUMNS)

    def as_dict(self):
        return {"criterion": self.criterion, "params": dict(self.params), "aggregate": self.aggregate,
                "verdict": self.verdict, "windows": self.windows.as_dict(),
                "functionals": [c.as_dict() for c in self.components], "minimizers": dict(self.minimizers),
                "warnings": list(self.warnings)}


def _worst(verdicts):
    return max(verdicts, key=lambda verdict: _VERDICT_RANK[verdict])


def _relative_change(base, check):
    if base == check:
        return 0.0
    if not (math.isfinite(base) and math.isfinite(check)) or base == 0.0:
        return math.inf
    return abs(check - base) / abs(base)


def _tau_range(spec, tau_window):
    if not spec.tilde:
        return np.arange(-tau_window, tau_window + 1)
    return np.arange(0, tau_window + 1) if spec.side == "+" else np.arange(-tau_window, 1)


def _series_plan(spec, series_window):
    """Both bracketed sums: (weight, mass power, kernel exponent, direction, length, capped at r=0)."""
    p, q, theta, eps = spec.p, spec.p_conjugate, spec.theta, spec.epsilon
    sign = 1 if spec.side == "+" else -1
    first, second = spec.weights
    if spec.family in (M_BOLD, M_SCRIPT):
        order = theta - 1 if spec.family == M_BOLD else 2 * theta - 1
        return [(first, 1.0, p * order * eps, sign, series_window, False),
                (second, 1.0 - q, q * order * (1.0 - eps), -sign, series_window, spec.tilde)]
    order = theta + 1 if spec.family == M_PLAIN else 2 * theta + 1
    return [(first, 1.0, -p * order * eps, -sign, theta + 1, False),
            (second, 1.0 - q, -q * order * (1.0 - eps), sign, theta + 1, False)]


def _mass_level(spec):
    if spec.family in (M_BOLD, M_PLAIN):
        return 0
    return max(spec.d - 1, 0)


def _log_series(log_mass, r0, taus, kernel, direction, capped):
    """
    ``log sum_k exp(kernel[k] + log_mass[tau + direction*k - r0])`` for every ``tau``.

    Also returns the sums over the last two dyadic blocks of ``k``; ``capped`` keeps only
    ``k <= |tau|``.
    """
    length = len(kernel)
    ks = np.arange(length)
    steps = direction * ks
    rows = max(1, CHUNK_CELLS // length)
    total, last, previous = (np.empty(len(taus)) for _ in range(3))
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        for start in range(0, len(taus), rows):
            block = taus[start:start + rows]
            values = log_mass[(block - r0)[:, None] + steps[None, :]] + kernel[None, :]
            if capped:
                values = np.where(ks[None, :] <= np.abs(block)[:, None], values, -np.inf)
            chunk = slice(start, start + len(block))
            total[chunk] = logsumexp(values, axis=1)
            last[chunk] = logsumexp(values[:, length // 2:], axis=1)
            previous[chunk] = logsumexp(values[:, length // 4:length // 2], axis=1)
    return total, last, previous


def _log_profile(spec, trunc):
    """Log of the bracketed product at every scanned ``tau``, with per-``tau`` divergence flags and tail shares."""
    taus = _tau_range(spec, trunc.tau_window)
    c = spec.halfline or 0.0
    level = _mass_level(spec)
    if spec.family == FRAK:
        sigma1, sigma2 = spec.weights
        log_values = (dyadic_log_masses(sigma2, level, taus, c) - dyadic_log_masses(sigma1, level, taus, c)) / spec.p
        flags = np.zeros(len(taus), dtype=bool)
        return taus, log_values, flags, np.zeros(len(taus))
    log_values = np.zeros(len(taus))
    flags = np.zeros(len(taus), dtype=bool)
    shares = np.zeros(len(taus))
    for (weight, power, exponent, direction, length, capped), outer in zip(
            _series_plan(spec, trunc.series_window), (1.0 / spec.p, 1.0 / spec.p_conjugate)):
        r0 = int(taus[0]) - length
        rs = np.arange(r0, int(taus[-1]) + length + 1)
        with np.errstate(invalid="ignore", over="ignore"):
            log_mass = power * dyadic_log_masses(weight, level, rs, c)
        kernel = exponent * np.log1p(np.arange(length, dtype=float)) if exponent != 0.0 else np.zeros(length)
        total, last, previous = _log_series(log_mass, r0, taus, kernel, direction, capped)
        log_values = log_values + outer * total
        if spec.family in (M_BOLD, M_SCRIPT) and not capped:
            flags |= np.isfinite(last) & (last >= previous + math.log(DIVERGENCE_RATIO))
            with np.errstate(invalid="ignore"):
                shares = np.maximum(shares, np.nan_to_num(np.exp(last - total)))
    log_values = np.where(np.isnan(log_values), np.inf, log_values)
    return taus, log_values, flags, shares


def _evaluate(spec, trunc):
    taus, log_values, flags, shares = _log_profile(spec, trunc)
    if flags.any():
        return math.inf, int(taus[np.argmax(flags)]), float(shares[np.argmax(flags)]), True
    if spec.family in LEVEL_FAMILIES and spec.d > 0:
        log_values = log_values - spec.d * spec.kappa * _LOG2
    best = int(np.argmax(log_values))
    with np.errstate(over="ignore"):
        value = float(np.exp(log_values[best]))
    return value, int(taus[best]), float(shares[best]), math.isinf(value)


def eval_functional(spec, trunc=None, check=True):
    """
    Value of a functional over the scanned windows, with its convergence verdict.

    Parameters
    ----------
    spec : FunctionalSpec
        Family, side, exponents and weights.
    trunc : Truncation, optional
        Scanned windows; defaults to ``|tau| <= 512``, 4096 series terms.
    check : bool
        Re-evaluates with both windows doubled; the verdict is ``converged`` when the
        value moves by less than ``CONVERGENCE_REL``.

    Returns
    -------
    FunctionalResult
        The supremum over the scanned ``tau`` of the product of the two bracketed sums
        (or of the single mass ratio for ``frak``). When the last dyadic block of a series
        does not decay, the value is ``inf`` with the offending ``tau`` and the verdict
        ``diverging``. The doubled windows only change the verdict, never the value.

    Notes
    -----
    Sums are taken in log space, so power kernels and exponential weights do not
    overflow before the final exponentiation.

    Examples
    --------
    >>> from src.rlbesov.weights import constant_weight
    >>> one = constant_weight()
    >>> eval_functional(FunctionalSpec(FRAK, (one, one), d=3)).value
    1.0
    >>> eval_functional(FunctionalSpec(M_BOLD, (one, one)), Truncation(8, 64, 2)).verdict
    'diverging'
    """
    trunc = trunc or Truncation()
    value, tau_star, share, diverged = _evaluate(spec, trunc)
    d_star = spec.d if spec.family in LEVEL_FAMILIES else None
    series = trunc.series_window if spec.family != FRAK else None
    if diverged:
        logger.warning(f"Warning! {spec.name} diverges: witness tau={tau_star}")
        return FunctionalResult(spec.name, math.inf, tau_star, d_star, trunc.tau_window, series, share,
                                DIVERGING, math.inf)
    if not check:
        return FunctionalResult(spec.name, value, tau_star, d_star, trunc.tau_window, series, share, INCONCLUSIVE)
    check_value, _, _, check_diverged = _evaluate(spec, trunc.doubled())
    if check_diverged:
        verdict = DIVERGING
        logger.warning(f"Warning! {spec.name} diverges once the windows are doubled")
    elif _relative_change(value, check_value) < CONVERGENCE_REL:
        verdict = CONVERGED
    else:
        verdict = INCONCLUSIVE
    return FunctionalResult(spec.name, value, tau_star, d_star, trunc.tau_window, series, share, verdict,
                            math.inf if check_diverged else check_value)


def _profile_frame(results):
    return pd.DataFrame([[r.name, r.d_star, r.value, r.tau_star, r.verdict] for r in results],
                        columns=D_PROFILE_COLUMNS)


def _sum_results(name, results):
    value = 0.0
    check_value = 0.0
    for result in results:
        value += result.value
        check_value += result.check_value
    leader = max(results, key=lambda result: result.value)
    return FunctionalResult(name, value, leader.tau_star, leader.d_star, leader.tau_window, leader.series_window,
                            max(result.tail_ratio for result in results), _worst(r.verdict for r in results),
                            check_value)


def _grows_geometrically(values):
    """Top of a level profile still growing by a factor that does not shrink."""
    if len(values) < 3 or not all(math.isfinite(value) and value > 0.0 for value in values[-3:]):
        return False
    earlier, latest = values[-2] / values[-3], values[-1] / values[-2]
    return latest >= 1.0 + CONVERGENCE_REL and latest - 1.0 >= GROWTH_PERSISTENCE * (earlier - 1.0)


def _level_sup(name, evaluate, d_values, threads=None):
    """
    Sup over levels of per-level results, ordered reduction (first maximal ``d`` wins).

    A profile still growing geometrically at the top level is reported as an
    ``inf``-witness at that level.
    """
    d_values = list(d_values)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(evaluate, d_values))
    values = [result.value for result in results]
    best = int(np.argmax(values))
    leader = results[best]
    profile = _profile_frame(results)
    if any(result.verdict == DIVERGING and math.isinf(result.value) for result in results):
        return FunctionalResult(name, math.inf, leader.tau_star, leader.d_star, leader.tau_window,
                                leader.series_window, leader.tail_ratio, DIVERGING, math.inf), profile
    if _grows_geometrically(values):
        top = results[-1]
        logger.warning(f"Warning! {name} grows geometrically up to d={top.d_star}")
        return FunctionalResult(name, math.inf, top.tau_star, top.d_star, top.tau_window, top.series_window,
                                top.tail_ratio, DIVERGING, math.inf), profile
    check_value = max(result.check_value for result in results)
    if any(result.verdict == DIVERGING for result in results):
        verdict = DIVERGING
    elif _relative_change(leader.value, check_value) < CONVERGENCE_REL:
        verdict = CONVERGED
    else:
        verdict = INCONCLUSIVE
    return FunctionalResult(name, leader.value, leader.tau_star, leader.d_star, leader.tau_window,
                            leader.series_window, leader.tail_ratio, verdict, check_value), profile


def _report(criterion, params, components, trunc, profiles=None, minimizers=None):
    aggregate = 0.0
    aggregate_check = 0.0
    for component in components:
        aggregate += component.value
        aggregate_check += component.check_value
    if any(component.verdict == DIVERGING for component in components) or math.isinf(aggregate):
        verdict = DIVERGING
    elif _relative_change(aggregate, aggregate_check) < CONVERGENCE_REL:
        verdict = CONVERGED
    else:
        verdict = INCONCLUSIVE
    warnings = tuple(f"{component.name}: {component.verdict}" for component in components
                     if component.verdict != CONVERGED)
    for warning in warnings:
        logger.warning(f"Warning! {criterion} component {warning}")
    logger.info(f"{criterion}: aggregate {aggregate:g} ({verdict})")
    return CriterionReport(criterion, params, tuple(components), aggregate, aggregate_check, verdict, trunc,
                           minimizers or {}, profiles or {}, warnings)


def _frak_sup(kappa, p, side, sigma1, sigma2, c, trunc, d_first, threads):
    base = FunctionalSpec(FRAK, (sigma1, sigma2), side=side, kappa=kappa, p=p, halfline=c)
    name = ("~" if c is not None else "") + f"sup_d frak{side}(kappa={kappa:g})"
    return _level_sup(name, lambda d: eval_functional(replace(base, d=d), trunc),
                      range(d_first, trunc.d_max + 1), threads)


def _m_bold_pair(alpha, p, side, u, v, c, trunc):
    base = FunctionalSpec(M_BOLD, (u, v), side=side, theta=alpha, p=p, halfline=c)
    return [eval_functional(replace(base, epsilon=1.0), trunc), eval_functional(replace(base, epsilon=0.0), trunc)]


def _upper(criterion, alpha, kappa, p, side, u, v, c, trunc, threads):
    trunc = trunc or Truncation()
    sup, profile = _frak_sup(kappa, p, side, v, u, c, trunc, 1, threads)
    components = _m_bold_pair(alpha, p, side, u, v, c, trunc) + [sup]
    params = {"alpha": alpha, "kappa": kappa, "p": p, "side": side, "c": c, "u": u.describe(), "v": v.describe()}
    return _report(criterion, params, components, trunc, {sup.name: profile})


def _lower(criterion, alpha, kappa, p, side, u, w, c, trunc, threads):
    trunc = trunc or Truncation()
    sup, profile = _frak_sup(kappa, p, side, u, w, c, trunc, 0, threads)
    params = {"alpha": alpha, "kappa": kappa, "p": p, "side": side, "c": c, "u": u.describe(), "w": w.describe()}
    return _report(criterion, params, [sup], trunc, {sup.name: profile})


def criterion_full_line(alpha, kappa_star, p, u, v, trunc=None, side="+", threads=None):
    """
    Constant ``M^alpha(1) + M^alpha(0) + sup_{1 <= d <= d_max} frak(d, kappa*; v, u)``.

    Finiteness of the aggregate is the criterion for ``I_{+-}^alpha`` to be bounded
    from ``B^{s-alpha, v}_{pq}`` into ``B^{s, u}_{pq}`` on the whole line.

    Examples
    --------
    >>> from src.rlbesov.weights import power_weight
    >>> u = power_weight(3)
    >>> criterion_full_line(1, 0.0, 2.0, u, u, Truncation(16, 64, 4)).components[2].value
    1.0
    """
    return _upper("full-line", alpha, kappa_star, p, side, u, v, None, trunc, threads)


def criterion_lower(alpha, kappa_low, p, u, w, trunc=None, side="+", threads=None):
    """Constant ``sup_{0 <= d <= d_max} frak(d, kappa_*; u, w)`` of the reverse inequality."""
    return _lower("lower", alpha, kappa_low, p, side, u, w, None, trunc, threads)


def _half_line_weights(weights, part):
    needed = ("u", "v") if part == "upper" else ("u", "w")
    if part not in ("upper", "lower"):
        raise PreconditionError("half-line part must be 'upper' or 'lower'", part=part)
    missing = [key for key in needed if weights.get(key) is None]
    if missing:
        raise PreconditionError("half-line criterion is missing weights", part=part, missing=missing)
    return [weights[key] for key in needed]


def criterion_half_line(alpha, kappa, c, side, p, weights, trunc=None, part="upper", threads=None):
    """
    Tilde aggregates on the half-line ``(c, inf)`` (``side="+"``) or ``(-inf, c)``.

    Parameters
    ----------
    alpha : int
        Operator order.
    kappa : float
        Level exponent ``kappa*`` (upper) or ``kappa_*`` (lower).
    c : float
        Offset of the shifted intervals ``Q^<c>_{dr} = [(r+c)/2**d, (r+c+1)/2**d]``.
    side : {"+", "-"}
        ``tau`` runs over ``N_0`` or ``-N_0``.
    p : float
        Integrability exponent, ``p > 1``.
    weights : dict
        ``{"u", "v"}`` for the upper aggregate, ``{"u", "w"}`` for the lower one.
    trunc : Truncation, optional
    part : {"upper", "lower"}
        Which aggregate to evaluate.

    Returns
    -------
    CriterionReport
        Upper: ``~M^alpha(1, c) + ~M^alpha(0, c) + sup_{d >= 1} ~frak(d, kappa, c; v, u)``.
        Lower: ``sup_{d >= 0} ~frak(d, kappa, c; u, w)``.
    """
    first, second = _half_line_weights(weights, part)
    if part == "upper":
        return _upper("half-line upper", alpha, kappa, p, side, first, second, float(c), trunc, threads)
    return _lower("half-line lower", alpha, kappa, p, side, first, second, float(c), trunc, threads)


def _prior_upper(criterion, alpha, kappa, p, side, u, v, c, trunc, threads):
    trunc = trunc or Truncation()
    base = FunctionalSpec(M_SCRIPT, (u, v), side=side, theta=alpha, kappa=kappa, p=p, halfline=c)
    prefix = "~" if c is not None else ""
    name = f"{prefix}sup_d [M_script{side}^{alpha}(kappa={kappa:g}, eps=1) + (eps=0)]"

    def level(d):
        pair = [eval_functional(replace(base, d=d, epsilon=eps), trunc) for eps in (1.0, 0.0)]
        return _sum_results(f"{prefix}M_script{side}^{alpha}(d={d}, eps=1) + (eps=0)", pair)

    sup, profile = _level_sup(name, level, range(1, trunc.d_max + 1), threads)
    components = _m_bold_pair(alpha, p, side, u, v, c, trunc) + [sup]
    params = {"alpha": alpha, "kappa": kappa, "p": p, "side": side, "c": c, "u": u.describe(), "v": v.describe()}
    return _report(criterion, params, components, trunc, {sup.name: profile})


def _prior_lower(criterion, alpha, kappa, p, side, u, w, c, trunc, threads):
    trunc = trunc or Truncation()
    plain = FunctionalSpec(M_PLAIN, (w, u), side=side, theta=alpha, p=p, halfline=c)
    bb = FunctionalSpec(M_BB, (w, u), side=side, theta=alpha, kappa=kappa, p=p, halfline=c)
    prefix = "~" if c is not None else ""
    plain_results = [eval_functional(replace(plain, epsilon=eps), trunc) for eps in EPSILON_GRID]
    bb_results, profiles = [], {}
    for eps in EPSILON_GRID:
        spec = replace(bb, epsilon=eps)
        sup, profile = _level_sup(f"{prefix}sup_d M_bb{side}^{alpha}(kappa={kappa:g}, eps={eps:g})",
                                  lambda d, spec=spec: eval_functional(replace(spec, d=d), trunc),
                                  range(1, trunc.d_max + 1), threads)
        bb_results.append(sup)
        profiles[sup.name] = profile
    # first minimal epsilon wins
    i_plain = min(range(len(EPSILON_GRID)), key=lambda i: plain_results[i].value)
    i_bb = min(range(len(EPSILON_GRID)), key=lambda i: bb_results[i].value)
    minimizers = {"epsilon_M": EPSILON_GRID[i_plain], "epsilon_MM": EPSILON_GRID[i_bb]}
    params = {"alpha": alpha, "kappa": kappa, "p": p, "side": side, "c": c, "u": u.describe(), "w": w.describe()}
    return _report(criterion, params, [plain_results[i_plain], bb_results[i_bb]], trunc, profiles, minimizers)


def criterion_prior_upper(alpha, kappa_star, p, u, v, trunc=None, side="+", threads=None):
    """
    Sufficient-condition constant ``M^alpha(1) + M^alpha(0) + sup_d [Mscript(d, kappa*, 1) + Mscript(d, kappa*, 0)]``.

    Uses the same windows as :func:`criterion_full_line`, so the two aggregates are
    directly comparable (see :func:`redundancy_check`).
    """
    return _prior_upper("prior upper", alpha, kappa_star, p, side, u, v, None, trunc, threads)


def criterion_prior_lower(alpha, kappa_low, p, u, w, trunc=None, side="+", threads=None):
    """
    ``min_eps M^alpha(eps) + min_eps sup_d MM^alpha(d, kappa_*, eps)`` with ``eps`` in ``EPSILON_GRID``.

    The minimizing ``eps`` values are reported in ``minimizers``.
    """
    return _prior_lower("prior lower", alpha, kappa_low, p, side, u, w, None, trunc, threads)


def criterion_prior_half_line(alpha, kappa, c, side, p, weights, trunc=None, part="upper", threads=None):
    """Tilde versions of :func:`criterion_prior_upper` and :func:`criterion_prior_lower`."""
    first, second = _half_line_weights(weights, part)
    if part == "upper":
        return _prior_upper("prior half-line upper", alpha, kappa, p, side, first, second, float(c), trunc, threads)
    return _prior_lower("prior half-line lower", alpha, kappa, p, side, first, second, float(c), trunc, threads)


def redundancy_check(full, prior):
    """``True`` iff the prior aggregate dominates the new one (exact comparison)."""
    return prior.aggregate >= full.aggregate


def d_profile(spec, d_values, trunc=None, threads=None):
    """
    Per-level values of a level-indexed functional.

    Returns
    -------
    pandas.DataFrame
        Columns ``D_PROFILE_COLUMNS``, one row per ``d``.
    """
    if spec.family not in LEVEL_FAMILIES:
        raise PreconditionError("d-profile needs a level-indexed family", family=spec.family)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda d: eval_functional(replace(spec, d=d), trunc), list(d_values)))
    return _profile_frame(results)


def usl_ratio(sigma, rs, c=0.0):
    """
    Worst factor between ``int_r^{r+1} sigma`` and ``sigma(r + 1/2)`` over ``rs``.

    The averaging condition holds on ``rs`` when the factor stays below ``USL_FACTOR``.
    """
    rs = np.asarray(rs, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        ratios = dyadic_masses(sigma, 0, rs, c) / sigma(rs + c + 0.5)
        worst = np.maximum(ratios, 1.0 / ratios)
    worst = np.where(np.isnan(worst), np.inf, worst)
    return float(np.max(worst))


def _half_integral(integrand, lo, hi, splits=()):
    """
    Returns ``(value, diverged)``.

    The range is cut at ``splits`` (kinks of the weights) so that an unbounded piece is
    smooth; a non-converged quadrature on an unbounded piece is divergence evidence.
    """
    if lo == hi:
        return 0.0, False
    edges = [lo] + sorted(point for point in set(splits) if lo < point < hi) + [hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        out = quad(integrand, a, b, epsrel=QUAD_REL_TOL, epsabs=0.0, limit=QUAD_LIMIT, full_output=1)
        value = float(out[0])
        unbounded = math.isinf(a) or math.isinf(b)
        if not math.isfinite(value) or (len(out) > 3 and unbounded):
            return math.inf, True
        if len(out) > 3:
            logger.warning(f"Warning! quadrature on [{a}, {b}] reported: {out[3]}")
        total += value
    return total, False


def _integral_profile(theta, epsilon, side, u, v, p, c, tau_window):
    q = p / (p - 1.0)
    dual = v.powered(1.0 - q)
    splits = (u.shift, dual.shift)
    k_first = p * (theta - 1) * epsilon
    k_second = q * (theta - 1) * (1.0 - epsilon)
    origin = 0.0 if c is None else float(c)
    if c is None:
        taus = np.arange(-tau_window, tau_window + 1)
    else:
        taus = np.arange(0, tau_window + 1) if side == "+" else np.arange(-tau_window, 1)
    best, tau_star = -math.inf, None
    for tau in taus:
        a = float(tau) + origin
        if side == "+":
            first, diverged = _half_integral(lambda x: (x - a + 1.0) ** k_first * u(x), a, math.inf, splits)
            lower = origin if c is not None else -math.inf
            second, diverged_dual = _half_integral(lambda y: (a - y + 1.0) ** k_second * dual(y), lower, a, splits)
        else:
            first, diverged = _half_integral(lambda x: (a - x + 1.0) ** k_first * u(x), -math.inf, a, splits)
            upper = origin if c is not None else math.inf
            second, diverged_dual = _half_integral(lambda y: (y - a + 1.0) ** k_second * dual(y), a, upper, splits)
        if diverged or diverged_dual:
            return math.inf, int(tau), True
        value = first ** (1.0 / p) * second ** (1.0 / q)
        if value > best:
            best, tau_star = value, int(tau)
    return best, tau_star, False


def integral_form(theta, epsilon, side, u, v, p, trunc=None, c=None, check=True):
    """
    Integral form of ``M_{+-}^theta(eps)`` for weights satisfying the averaging condition.

    Parameters
    ----------
    theta : int
        Kernel order.
    epsilon : float
        Splitting exponent in ``[0, 1]``; ``0`` and ``1`` swap which integral carries
        the power kernel.
    side : {"+", "-"}
        Orientation.
    u, v : Weight
        Target and source weights.
    p : float
        ``p > 1``.
    trunc : Truncation, optional
        Only ``tau_window`` is used.
    c : float, optional
        Half-line offset; ``tau`` then runs over ``+-N_0`` and the dual integral stops at ``c``.
    check : bool
        Re-evaluates on the doubled ``tau`` window for the verdict.

    Returns
    -------
    FunctionalResult
        ``sup_tau`` of the product of the two adaptive-quadrature integrals over the
        half-lines. A failed averaging check is attached as a warning; the value is
        still returned.
    """
    if not p > 1.0:
        raise PreconditionError("criteria need p > 1", p=p)
    if side not in ("+", "-"):
        raise PreconditionError("side must be '+' or '-'", side=side)
    if not 0.0 <= epsilon <= 1.0:
        raise PreconditionError("epsilon must lie in [0, 1]", epsilon=epsilon)
    trunc = trunc or Truncation()
    name = f"{'~' if c is not None else ''}integral M{side}^{theta}(eps={epsilon:g})"
    warnings = []
    rs = np.arange(-trunc.tau_window, trunc.tau_window + 1)
    origin = 0.0 if c is None else float(c)
    for label, sigma in (("u", u), ("v^(1-p')", v.powered(1.0 - p / (p - 1.0)))):
        factor = usl_ratio(sigma, rs, origin)
        if factor > USL_FACTOR:
            warnings.append(f"averaging condition fails for {label}: factor {factor:g} > {USL_FACTOR:g}")
            logger.warning(f"Warning! {name}: {warnings[-1]}")
    value, tau_star, diverged = _integral_profile(theta, epsilon, side, u, v, p, c, trunc.tau_window)
    if diverged:
        logger.warning(f"Warning! {name} diverges: witness tau={tau_star}")
        return FunctionalResult(name, math.inf, tau_star, None, trunc.tau_window, None, 0.0, DIVERGING,
                                math.inf, tuple(warnings))
    if not check:
        return FunctionalResult(name, value, tau_star, None, trunc.tau_window, None, 0.0, INCONCLUSIVE,
                                math.nan, tuple(warnings))
    check_value, _, check_diverged = _integral_profile(theta, epsilon, side, u, v, p, c, 2 * trunc.tau_window)
    if check_diverged:
        verdict = DIVERGING
    else:
        verdict = CONVERGED if _relative_change(value, check_value) < CONVERGENCE_REL else INCONCLUSIVE
    return FunctionalResult(name, value, tau_star, None, trunc.tau_window, None, 0.0, verdict,
                            math.inf if check_diverged else check_value, tuple(warnings))


@dataclass(frozen=True)
class HomogeneityReport:
    kappa_opt: float
    kappa: float
    level_ratio: float
    statement: str
    profile: pd.DataFrame = None
    max_deviation: float = math.nan
    spread: float = math.nan

    def as_dict(self):
        payload = {"kappa_opt": self.kappa_opt, "kappa": self.kappa, "level_ratio": self.level_ratio,
                   "statement": self.statement, "max_deviation": self.max_deviation, "spread": self.spread}
        if self.profile is not None:
            payload["profile"] = self.profile.to_dict(orient="records")
        return payload


def homogeneity_reduction(s1, s2, kappa=None, p=2.0, sigma1=None, sigma2=None, c=0.0, side="+", d_values=None,
                          trunc=None):
    """
    Level reduction for weights whose antiderivatives are positively homogeneous.

    Parameters
    ----------
    s1, s2 : float
        Homogeneity degrees of the antiderivatives of ``sigma1`` and ``sigma2``.
    kappa : float, optional
        Level exponent; defaults to ``kappa_opt``.
    p : float
        ``p > 1``.
    sigma1, sigma2 : Weight, optional
        When both are given, ``~frak(d, kappa, c; sigma1, sigma2)`` is scanned over
        ``d_values`` and compared with the predicted profile.
    c : float
        Half-line offset.
    side : {"+", "-"}
    d_values : iterable of int, optional
        Defaults to ``0..10``.
    trunc : Truncation, optional

    Returns
    -------
    HomogeneityReport
        ``kappa_opt = (s1 - s2)/p``. Since ``Q^<c>_{d-1, r}`` is ``Q^<c>_{0r}`` scaled by
        ``2**(1-d)``, every level value equals ``2**(-d kappa + (d-1) kappa_opt)`` times
        the ``d = 0`` value: the profile over ``d >= 1`` is geometric with ratio
        ``2**(kappa_opt - kappa)`` and flat at ``kappa = kappa_opt``.

    Examples
    --------
    >>> homogeneity_reduction(1.5, 1.5).kappa_opt
    0.0
    """
    if not p > 1.0:
        raise PreconditionError("criteria need p > 1", p=p)
    kappa_opt = (s1 - s2) / p
    kappa = kappa_opt if kappa is None else float(kappa)
    level_ratio = 2.0 ** (kappa_opt - kappa)
    statement = (f"sup_d ~frak(d, {kappa_opt:g}) = max(~frak(0), 2^({-kappa_opt:g}) ~frak(0))"
                 if kappa == kappa_opt else f"~frak(d+1)/~frak(d) = {level_ratio:g} for d >= 1")
    if sigma1 is None or sigma2 is None:
        return HomogeneityReport(kappa_opt, kappa, level_ratio, statement)
    d_values = list(range(0, 11)) if d_values is None else list(d_values)
    base = FunctionalSpec(FRAK, (sigma1, sigma2), side=side, kappa=kappa, p=p, halfline=float(c))
    trunc = trunc or Truncation()
    values = [eval_functional(replace(base, d=d), trunc, check=False).value for d in d_values]
    zero = eval_functional(base, trunc, check=False).value
    predicted = [zero if d == 0 else 2.0 ** (-d * kappa + (d - 1) * kappa_opt) * zero for d in d_values]
    profile = pd.DataFrame(dict(zip(HOMOGENEITY_COLUMNS, (d_values, values, predicted))))
    deviation = float(np.max(np.abs(np.asarray(values) / np.asarray(predicted) - 1.0)))
    upper = [value for d, value in zip(d_values, values) if d >= 1]
    spread = float(max(upper) / min(upper) - 1.0) if upper else math.nan
    return HomogeneityReport(kappa_opt, kappa, level_ratio, statement, profile, deviation, spread)

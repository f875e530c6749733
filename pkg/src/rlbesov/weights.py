# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# weights.py
# Weight functions, interval masses, Muckenhoupt constants and doubling diagnostics
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.integrate import quad

from .errors import NumericFailure, PreconditionError
from .templates import (DOUBLING_COLUMNS, MUCKENHOUPT_COLUMNS, QUAD_LIMIT, QUAD_REL_TOL, RHO_MAX, RW_BISECTION_STEPS,
                        RW_CAP, SCAN_D_MAX, SCAN_MAX_INTERVALS, SCAN_TAU_SPAN)

logger = logging.getLogger(__name__)

WEIGHT_KINDS = ("power", "constant", "exponential", "monomial", "table")


@dataclass(eq=False)
class Weight:
    """
    A weight on the real line.

    ``power``: ``(1+|x|)**(-t+delta)``; ``constant``: ``c``; ``exponential``:
    ``exp(c|x|)``; ``monomial``: ``|x|**z`` with ``z > -1``; ``table``: linear
    interpolation of samples ``(xs, ws)``, constant outside the sampled range.
    Every kind accepts a ``shift`` parameter ``h`` standing for ``x -> w(x - h)``.
    Masses are cached per interval.
    """

    kind: str
    params: dict
    mass_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise PreconditionError("unknown weight kind", kind=self.kind, known=WEIGHT_KINDS)
        shift = float(self.params.get("shift", 0.0))
        if self.kind == "constant" and not self.params["c"] > 0.0:
            raise PreconditionError("constant weight must be positive", c=self.params["c"])
        if self.kind == "monomial" and not self.params["z"] > -1.0:
            raise PreconditionError("monomial weight needs z > -1 to be locally integrable", z=self.params["z"])
        if self.kind == "table":
            xs = np.asarray(self.params["xs"], dtype=float)
            ws = np.asarray(self.params["ws"], dtype=float)
            if xs.ndim != 1 or xs.shape != ws.shape or len(xs) < 2 or np.any(np.diff(xs) <= 0.0):
                raise PreconditionError("table weight needs increasing x samples with matching values")
            if np.any(ws <= 0.0):
                raise PreconditionError("table weight must be positive at every sample", x=float(xs[np.argmin(ws)]))
            self.params = {"xs": xs, "ws": ws}
        if shift != 0.0:
            self.params = {**self.params, "shift": shift}

    @property
    def shift(self):
        return self.params.get("shift", 0.0)

    @property
    def exponent(self):
        """Decay exponent ``t - delta`` of a power weight."""
        return self.params["t"] - self.params.get("delta", 0.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float) - self.shift
        if self.kind == "power":
            values = np.power(1.0 + np.abs(x), -self.exponent)
        elif self.kind == "constant":
            values = np.full_like(x, self.params["c"])
        elif self.kind == "exponential":
            values = np.exp(self.params["c"] * np.abs(x))
        elif self.kind == "monomial":
            values = np.power(np.abs(x), self.params["z"])
        else:
            values = np.interp(x, self.params["xs"], self.params["ws"])
        return float(values) if values.ndim == 0 else values

    def powered(self, gamma):
        """The weight ``w**gamma`` (same kind)."""
        shift = {"shift": self.shift} if self.shift else {}
        if self.kind == "power":
            return Weight("power", {"t": self.exponent * gamma, "delta": 0.0, **shift})
        if self.kind == "constant":
            return Weight("constant", {"c": self.params["c"] ** gamma, **shift})
        if self.kind == "exponential":
            return Weight("exponential", {"c": self.params["c"] * gamma, **shift})
        if self.kind == "monomial":
            # may leave the locally integrable range; the constructor reports it
            return Weight("monomial", {"z": self.params["z"] * gamma, **shift})
        return Weight("table", {"xs": self.params["xs"], "ws": self.params["ws"] ** gamma, **shift})

    def translated(self, h):
        """The weight ``x -> w(x - h)``."""
        params = {key: value for key, value in self.params.items() if key != "shift"}
        return Weight(self.kind, {**params, "shift": self.shift + float(h)})

    def describe(self):
        suffix = f" shift={self.shift:g}" if self.shift else ""
        if self.kind == "power":
            return f"power t={self.params['t']:g} delta={self.params.get('delta', 0.0):g}" + suffix
        if self.kind in ("constant", "exponential"):
            return f"{self.kind} c={self.params['c']:g}" + suffix
        if self.kind == "monomial":
            return f"monomial z={self.params['z']:g}" + suffix
        return f"table samples={len(self.params['xs'])}" + suffix


def power_weight(t, delta=0.0):
    return Weight("power", {"t": float(t), "delta": float(delta)})


def constant_weight(c=1.0):
    return Weight("constant", {"c": float(c)})


def exponential_weight(c=1.0):
    return Weight("exponential", {"c": float(c)})


def monomial_weight(z):
    return Weight("monomial", {"z": float(z)})


def table_weight(xs, ws):
    return Weight("table", {"xs": xs, "ws": ws})


def parse_weight(text):
    """
    Parses a weight descriptor.

    Parameters
    ----------
    text : str
        ``power t=3 delta=0``, ``constant 1``, ``exponential c=1``, ``monomial z=0.5``
        or ``table file=path`` (two columns x, w separated by commas, semicolons or
        blanks). Any kind takes an optional ``shift=h``.

    Returns
    -------
    Weight

    Raises
    ------
    PreconditionError
        If the descriptor is not understood.

    Examples
    --------
    >>> parse_weight("power t=3").describe()
    'power t=3 delta=0'
    >>> parse_weight("constant 2").params
    {'c': 2.0}
    """
    tokens = str(text).split()
    if not tokens:
        raise PreconditionError("empty weight descriptor")
    kind, rest = tokens[0].lower(), tokens[1:]
    first_key = {"table": "file", "power": "t", "monomial": "z"}.get(kind, "c")
    values = {}
    for position, token in enumerate(rest):
        if "=" in token:
            key, value = token.split("=", 1)
        elif position == 0:
            key, value = first_key, token
        else:
            raise PreconditionError("malformed weight descriptor", text=text)
        values[key.strip()] = value.strip()
    try:
        shift = float(values.pop("shift", 0.0))
        if kind == "power":
            weight = power_weight(float(values["t"]), float(values.get("delta", 0.0)))
        elif kind == "constant":
            weight = constant_weight(float(values.get("c", 1.0)))
        elif kind == "exponential":
            weight = exponential_weight(float(values.get("c", 1.0)))
        elif kind == "monomial":
            weight = monomial_weight(float(values["z"]))
        elif kind == "table":
            samples = pd.read_csv(values["file"], sep=r"[,;\s]+", engine="python", header=None, comment="#")
            weight = table_weight(samples.iloc[:, 0].to_numpy(float), samples.iloc[:, 1].to_numpy(float))
        else:
            raise PreconditionError("unknown weight kind", kind=kind, known=WEIGHT_KINDS)
    except (KeyError, ValueError, OSError) as e:
        raise PreconditionError("cannot parse weight descriptor", text=text, reason=str(e)) from e
    return weight.translated(shift) if shift else weight


def _power_segment(lo, hi, exponent):
    # integral of (1+x)**-exponent over [lo, hi], 0 <= lo <= hi
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    log_ratio = np.log1p((hi - lo) / (1.0 + lo))
    if exponent == 1.0:
        return log_ratio
    k = 1.0 - exponent
    return np.power(1.0 + lo, k) * np.expm1(k * log_ratio) / k


def _exp_segment(lo, hi, c):
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    if c == 0.0:
        return hi - lo
    return np.exp(c * lo) * np.expm1(c * (hi - lo)) / c


def _exp_log_segment(lo, hi, c):
    # log of _exp_segment; -inf on empty segments
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    length = hi - lo
    with np.errstate(divide="ignore"):
        if c == 0.0:
            return np.log(length)
        return c * lo + np.log(np.expm1(c * length) / c)


def _monomial_segment(lo, hi, z):
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    return (np.power(hi, z + 1.0) - np.power(lo, z + 1.0)) / (z + 1.0)


def _split_closed_form(segment, lo, hi):
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    positive = segment(np.maximum(lo, 0.0), np.maximum(hi, 0.0))
    negative = segment(np.maximum(-hi, 0.0), np.maximum(-lo, 0.0))
    return positive + negative


def _closed_form(w):
    if w.kind == "power":
        return lambda a, b: _power_segment(a, b, w.exponent)
    if w.kind == "exponential":
        return lambda a, b: _exp_segment(a, b, w.params["c"])
    if w.kind == "monomial":
        return lambda a, b: _monomial_segment(a, b, w.params["z"])
    return None


def _quad_mass(w, lo, hi):
    points = None
    if w.kind == "table":
        xs = w.params["xs"] + w.shift
        inside = xs[(xs > lo) & (xs < hi)]
        points = inside[:QUAD_LIMIT - 1] if len(inside) else None
    out = quad(w, lo, hi, epsrel=QUAD_REL_TOL, epsabs=0.0, limit=QUAD_LIMIT, points=points, full_output=1)
    if len(out) > 3:
        raise NumericFailure("quadrature did not converge", interval=(lo, hi), message=out[3])
    return float(out[0])


def weight_mass(w, lo, hi):
    """
    Mass ``w([lo, hi])``.

    Closed forms for power, constant, exponential and monomial weights; adaptive
    quadrature (relative error ``QUAD_REL_TOL``) for tabulated weights. Values are
    cached per interval, so a repeated query returns the same bits.

    Raises
    ------
    PreconditionError
        If the interval is unbounded or reversed.
    NumericFailure
        If the quadrature does not converge.

    Examples
    --------
    >>> weight_mass(power_weight(2), 0.0, 1.0)
    0.5
    """
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise PreconditionError("mass needs a bounded interval", lo=lo, hi=hi)
    key = (lo, hi)
    cached = w.mass_cache.get(key)
    if cached is not None:
        return cached
    segment = _closed_form(w)
    if segment is not None:
        value = float(_split_closed_form(segment, lo - w.shift, hi - w.shift))
    elif w.kind == "constant":
        value = w.params["c"] * (hi - lo)
    else:
        value = _quad_mass(w, lo, hi)
    w.mass_cache[key] = value
    return value


def _dyadic_bounds(w, d, rs, c):
    rs = np.asarray(rs, dtype=float)
    length = 2.0 ** (-d)
    lo = (rs + c) * length - w.shift
    return rs, lo, lo + length, length


def dyadic_masses(w, d, rs, c=0.0):
    """
    Masses of ``Q_{dr}^<c> = [(r+c)/2**d, (r+c+1)/2**d]`` for every ``r`` in ``rs``.

    ``d`` may be negative (intervals longer than 1).
    """
    rs, lo, hi, length = _dyadic_bounds(w, d, rs, c)
    segment = _closed_form(w)
    if segment is not None:
        return _split_closed_form(segment, lo, hi)
    if w.kind == "constant":
        return np.full(rs.shape, w.params["c"] * length)
    return np.array([weight_mass(w, a + w.shift, b + w.shift) for a, b in zip(lo, hi)])


def dyadic_log_masses(w, d, rs, c=0.0):
    """
    Logarithms of the masses of ``Q_{dr}^<c>``.

    Exponential weights are summed in log space, so intervals far out stay finite
    where the masses themselves overflow.
    """
    if w.kind != "exponential":
        with np.errstate(divide="ignore"):
            return np.log(dyadic_masses(w, d, rs, c))
    rs, lo, hi, _ = _dyadic_bounds(w, d, rs, c)
    rate = w.params["c"]
    positive = _exp_log_segment(np.maximum(lo, 0.0), np.maximum(hi, 0.0), rate)
    negative = _exp_log_segment(np.maximum(-hi, 0.0), np.maximum(-lo, 0.0), rate)
    return np.logaddexp(positive, negative)


def _infimum_on(w, lo, hi):
    candidates = [lo, hi]
    if lo < w.shift < hi:
        candidates.append(w.shift)
    if w.kind == "table":
        xs = w.params["xs"] + w.shift
        candidates.extend(xs[(xs > lo) & (xs < hi)])
    return float(np.min(w(np.array(candidates))))


def _dual_weight(w, rho):
    # w**(1-rho'); None when that power is not locally integrable
    try:
        return w.powered(-1.0 / (rho - 1.0))
    except PreconditionError:
        return None


def muckenhoupt_local(w, rho, lo, hi):
    """
    ``A_rho[w(Q)]`` on ``Q = [lo, hi]``; ``rho = 1`` uses the essential-infimum form.

    Returns ``inf`` when ``w**(1-rho')`` is not integrable on ``Q``.
    """
    length = hi - lo
    average = weight_mass(w, lo, hi) / length
    if rho == 1.0:
        inf = _infimum_on(w, lo, hi)
        return math.inf if inf <= 0.0 else average / inf
    dual = _dual_weight(w, rho)
    if dual is None:
        return math.inf
    dual_average = weight_mass(dual, lo, hi) / length
    if not math.isfinite(dual_average):
        return math.inf
    return average * dual_average ** (rho - 1.0)


@dataclass(frozen=True)
class MuckenhouptScan:
    """Dyadic intervals ``Q_{d tau}`` with ``d_min <= d <= d_max`` and ``|tau| <= 2**d * tau_span``."""

    d_max: int = SCAN_D_MAX
    tau_span: float = SCAN_TAU_SPAN
    d_min: int = 0
    max_intervals: int = SCAN_MAX_INTERVALS

    def levels(self, local):
        first = max(self.d_min, 0) if local else self.d_min
        return list(range(first, self.d_max + 1))

    def taus(self, d):
        reach = max(1, int(math.floor(2.0 ** d * self.tau_span)))
        return np.arange(-reach, reach)


@dataclass(frozen=True)
class MuckenhouptEstimate:
    rho: float
    local: bool
    value: float
    witness: tuple
    intervals: int
    levels: tuple

    def as_frame(self):
        return pd.DataFrame([list(level) for level in self.levels], columns=MUCKENHOUPT_COLUMNS)


def _scan_level(w, rho, d, taus):
    length = 2.0 ** (-d)
    best, witness = -math.inf, None
    masses = dyadic_masses(w, d, taus)
    if rho == 1.0:
        duals = None
    else:
        dual = _dual_weight(w, rho)
        duals = np.full(len(taus), math.inf) if dual is None else dyadic_masses(dual, d, taus)
    for i, tau in enumerate(taus):
        lo, hi = tau * length, (tau + 1) * length
        if duals is None:
            inf = _infimum_on(w, lo, hi)
            value = math.inf if inf <= 0.0 else masses[i] / length / inf
        else:
            value = masses[i] / length * (duals[i] / length) ** (rho - 1.0)
            if not math.isfinite(value):
                value = math.inf
        if value > best:
            best, witness = value, (lo, hi)
    return best, witness


def muckenhoupt_constant(w, rho, local=True, scan=None, threads=None):
    """
    Scan-based lower estimate of the Muckenhoupt constant ``A_rho(w)``.

    Parameters
    ----------
    w : Weight
        The weight.
    rho : float
        ``rho >= 1``.
    local : bool
        Restricts the scan to intervals of length at most 1 (local class).
    scan : MuckenhouptScan, optional
        Interval grid; global mode also scans the levels ``d_min <= d < 0``.
    threads : int, optional
        Worker cap; the reduction is ordered by level.

    Returns
    -------
    MuckenhouptEstimate
        Maximum of ``A_rho[w(Q)]`` over the scanned intervals with the maximizing interval
        and the per-level maxima. An estimate never proves membership in the class.

    Raises
    ------
    PreconditionError
        If ``rho < 1`` or the scan exceeds ``max_intervals``.
    """
    if not rho >= 1.0:
        raise PreconditionError("Muckenhoupt index must satisfy rho >= 1", rho=rho)
    scan = scan or MuckenhouptScan()
    levels = scan.levels(local)
    grids = [(d, scan.taus(d)) for d in levels]
    total = sum(len(taus) for _, taus in grids)
    if total > scan.max_intervals:
        raise PreconditionError("Muckenhoupt scan too large", intervals=total, max_intervals=scan.max_intervals)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda item: _scan_level(w, float(rho), item[0], item[1]), grids))
    best, witness = -math.inf, None
    rows = []
    for best_d, witness_d in results:
        rows.append((witness_d[0], witness_d[1], best_d))
        if best_d > best:
            best, witness = best_d, witness_d
    if math.isinf(best):
        logger.warning(f"Warning! A_{rho} scan hit a non-integrable interval {witness}")
    return MuckenhouptEstimate(float(rho), bool(local), best, witness, total, tuple(rows))


def estimate_rw(w, scan=None, cap=RW_CAP, rho_max=RHO_MAX, steps=RW_BISECTION_STEPS):
    """
    Bracket for ``r_w = inf{r >= 1 : w in A_r^loc}`` by bisection on scan estimates.

    A value of ``rho`` counts as admissible when the local scan estimate stays below
    ``cap``. Returns ``(lo, hi)``; ``(1.0, 1.0)`` when ``rho = 1`` already passes and
    ``(rho_max, inf)`` when no scanned ``rho`` passes.
    """
    scan = scan or MuckenhouptScan()

    def admissible(rho):
        return muckenhoupt_constant(w, rho, local=True, scan=scan).value < cap

    if admissible(1.0):
        return 1.0, 1.0
    if not admissible(rho_max):
        logger.warning(f"Warning! No local Muckenhoupt index up to {rho_max} for {w.describe()}")
        return rho_max, math.inf
    lo, hi = 1.0, rho_max
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if admissible(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def sigma_p(rw, p):
    """``sigma_p(w) = r_w / min(p, r_w) - 2 + r_w``."""
    return rw / min(p, rw) - 2.0 + rw


def condb_min_order(s, p, rw):
    """
    Smallest spline order allowed for the space ``B^{s,w}_{pq}``.

    ``n >= max{0, [s]+1, [(r_w-1)/p - s]+1, [sigma_p(w) - s]} + 1`` with ``[.]`` the
    integer part (floor).

    Examples
    --------
    >>> condb_min_order(2.0, 2.0, 1.0)
    4
    """
    return max(0, math.floor(s) + 1, math.floor((rw - 1.0) / p - s) + 1, math.floor(sigma_p(rw, p) - s)) + 1


@dataclass(frozen=True)
class DoublingReport:
    rho: float
    rho_star: float
    c_one: float
    c_two: float
    table: pd.DataFrame


def doubling_check(w, rho, pairs, rho_star=None):
    """
    Empirical constants of the forward and reverse doubling inequalities.

    Parameters
    ----------
    w : Weight
        The weight.
    rho : float
        Exponent of the forward form ``(|F|/|B|)**rho <= c_I w(F)/w(B)``.
    pairs : list of ((float, float), (float, float))
        Nested intervals ``(F, B)`` with ``F`` inside ``B``.
    rho_star : float, optional
        Exponent of the reverse form ``w(F)/w(B) <= c_II (|F|/|B|)**rho_star``.

    Returns
    -------
    DoublingReport
        ``c_one`` and ``c_two`` are the maxima of the two ratios over the pairs
        (``c_two`` is ``nan`` without ``rho_star``); ``table`` lists every pair.

    Raises
    ------
    PreconditionError
        If some ``F`` is not inside its ``B``.
    """
    rows = []
    for (f_lo, f_hi), (b_lo, b_hi) in pairs:
        if not (b_lo <= f_lo < f_hi <= b_hi):
            raise PreconditionError("doubling pair must satisfy F inside B", F=(f_lo, f_hi), B=(b_lo, b_hi))
        ratio_len = (f_hi - f_lo) / (b_hi - b_lo)
        mass_f, mass_b = weight_mass(w, f_lo, f_hi), weight_mass(w, b_lo, b_hi)
        ratio_one = ratio_len ** rho * (mass_b / mass_f)
        ratio_two = (mass_f / mass_b) / ratio_len ** rho_star if rho_star is not None else math.nan
        rows.append([f_lo, f_hi, b_lo, b_hi, ratio_one, ratio_two])
    table = pd.DataFrame(rows, columns=DOUBLING_COLUMNS)
    c_two = float(table["Ratio II"].max()) if rho_star is not None else math.nan
    return DoublingReport(float(rho), rho_star, float(table["Ratio I"].max()), c_two, table)


def exp_doubling_constant(w, pairs):
    """
    Empirical ``c_w`` of ``w(Q_t) <= exp(c_w t/s) w(Q_s)``.

    ``pairs`` holds ``(center, s, t)`` for concentric intervals of lengths ``s <= t``;
    the value is ``max s * log(w(Q_t)/w(Q_s)) / t``. It is reported, never assumed.
    """
    best = -math.inf
    for center, s, t in pairs:
        if not 0.0 < s <= t:
            raise PreconditionError("concentric pair needs 0 < s <= t", s=s, t=t)
        inner = weight_mass(w, center - s / 2.0, center + s / 2.0)
        outer = weight_mass(w, center - t / 2.0, center + t / 2.0)
        best = max(best, s * math.log(outer / inner) / t)
    return best

# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# wavelet.py
# Battle-Lemarie scaling functions and wavelets, and the localized systems built from them
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .bspline import b_intersection, gram_row, spline_series, two_scale_coeffs
from .errors import ConsistencyError, NumericFailure, PreconditionError
from .piecewise import pp_inner, pp_transform, to_dyadic
from .templates import DEFAULT_TOL, MAX_ORDER, MIN_TOL

logger = logging.getLogger(__name__)

HALF_OFFSETS = (Fraction(0), Fraction(1, 2), Fraction(-1, 2))


@dataclass(frozen=True)
class OrthoConstants:
    """Roots of the Euler-Frobenius polynomial of order ``n`` and the constants derived from them."""

    n: int
    roots: tuple
    beta: float
    gamma: float
    lambda_cap: float
    rho: tuple

    def as_dict(self):
        return {
            "n": self.n,
            "roots": list(self.roots),
            "beta": self.beta,
            "gamma": self.gamma,
            "lambda_cap": self.lambda_cap,
            "rho": list(self.rho),
        }


@dataclass(frozen=True)
class SplineSystemSpec:
    """
    Parameters selecting a localized wavelet family.

    ``n`` spline order, ``a`` half-integer origin, ``s`` integer shift, ``m`` order of the
    companion factor, ``k_flag`` switches the companion factor on, ``zeta_flag`` switches
    the ``2*alpha``-difference on.
    """

    n: int
    a: Fraction = Fraction(0)
    s: int = 0
    m: int = 1
    k_flag: int = 0
    zeta_flag: int = 0
    alpha: int = 1

    def __post_init__(self):
        a = to_dyadic(self.a)
        object.__setattr__(self, "a", a)
        if a not in HALF_OFFSETS:
            raise PreconditionError("origin a must be 0 or +-1/2", a=str(a))
        if self.k_flag not in (0, 1) or self.zeta_flag not in (0, 1):
            raise PreconditionError("flags must be 0 or 1", k_flag=self.k_flag, zeta_flag=self.zeta_flag)
        if self.n < 1 or self.m < 1:
            raise PreconditionError("orders n and m must be >= 1", n=self.n, m=self.m)
        if self.zeta_flag and self.alpha < 1:
            raise PreconditionError("alpha must be >= 1 when the difference factor is on", alpha=self.alpha)
        if self.n + 2 * self.alpha * self.zeta_flag > MAX_ORDER:
            raise PreconditionError("order n + 2*alpha exceeds the maximal order", n=self.n, alpha=self.alpha)
        object.__setattr__(self, "s", int(self.s))

    @property
    def radius(self):
        """Half-width of the extra support added by the companion and difference factors."""
        return Fraction(self.m * self.k_flag, 2) + Fraction(self.alpha * self.zeta_flag, 2)


@dataclass(frozen=True, eq=False)
class WaveletElement:
    """
    A scaling function, wavelet or localized element.

    ``coeffs[i]`` multiplies ``B_n(2**dilation_log2 * x + first_shift + i)``. Truncated
    elements (``phi``, ``psi``) carry the tail bound of the neglected coefficients;
    localized elements are exact and also carry ``func``.
    """

    spec: SplineSystemSpec
    kind: str
    coeffs: np.ndarray
    first_shift: int
    dilation_log2: int
    support: tuple
    d: int = 0
    tau: int = 0
    func: object = None
    tail_bound: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def length(self):
        return int(self.coeffs.shape[0])

    def as_piecewise(self):
        if self.func is not None:
            return self.func
        return spline_series(self.spec.n, self.coeffs, self.first_shift, self.dilation_log2)

    def dilated(self, d, tau):
        """``2**(d/2) * F(2**d * x - tau)`` as a PiecewisePoly."""
        return pp_transform(self.as_piecewise(), scale=2.0 ** (d / 2.0), shift=tau, dilation_log2=d)


def _laurent_mul(a, a_min, b, b_min):
    return np.convolve(a, b), a_min + b_min


@lru_cache(maxsize=None)
def euler_constants(n):
    """
    Roots of the Euler-Frobenius polynomial and the orthonormalization constants.

    Parameters
    ----------
    n : int
        Spline order, ``1 <= n <= MAX_ORDER``.

    Returns
    -------
    OrthoConstants
        ``roots`` ``r_1 < ... < r_n`` in (0, 1), ``beta = prod(1 + r_j)``,
        ``gamma = 2**-n * beta * prod(r_j)``, ``lambda_cap = 2**n * prod(1/r_j - r_j)``,
        ``rho_j = r_j + 1/r_j``.

    Raises
    ------
    PreconditionError
        If ``n`` is out of range.
    NumericFailure
        If the root finder does not return ``n`` roots in (-1, 0).

    Notes
    -----
    1. The Gram symbol ``z**n * sum_k <B_n, B_n(. - k)> z**k`` has ``2n`` negative roots
       in reciprocal pairs ``-r_j``, ``-1/r_j``.
    2. The roots are taken from the companion-matrix eigenvalues (``numpy.roots``) and
       refined by bracketing (``scipy.optimize.brentq``).
    3. Self-check: the leading Gram value equals ``prod(r_j) / prod(1 + r_j)**2``.

    Examples
    --------
    >>> round(euler_constants(1).roots[0], 10)
    0.2679491924
    """
    if n < 1 or n > MAX_ORDER:
        raise PreconditionError("order out of range for orthonormalization", n=n, max_order=MAX_ORDER)
    symbol = gram_row(n)
    raw = np.roots(symbol)
    candidates = sorted(float(z.real) for z in raw if abs(z.imag) < 1e-8 * max(1.0, abs(z)) and -1.0 < z.real < 0.0)
    if len(candidates) != n:
        raise NumericFailure("Euler-Frobenius roots not found", n=n, eigenvalues=[complex(z) for z in raw])

    def poly(x):
        return float(np.polyval(symbol, x))

    roots = []
    for z in candidates:
        delta = 1e-9 * abs(z)
        for _ in range(40):
            lo, hi = z - delta, min(z + delta, -1e-300)
            if poly(lo) * poly(hi) < 0.0:
                z = brentq(poly, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
                break
            if poly(lo) == 0.0 or poly(hi) == 0.0:
                break
            delta *= 4.0
        else:
            logger.warning(f"Warning! Root {z} of order {n} kept without refinement")
        roots.append(-z)
    roots = sorted(roots)
    if not all(0.0 < r < 1.0 for r in roots):
        raise NumericFailure("Euler-Frobenius roots outside (0,1)", n=n, roots=roots)
    r = np.array(roots)
    beta = float(np.prod(1.0 + r))
    gamma = float(2.0 ** (-n) * beta * np.prod(r))
    lambda_cap = float(2.0 ** n * np.prod(1.0 / r - r))
    leading = float(np.prod(r) / np.prod((1.0 + r) ** 2))
    if abs(leading - symbol[-1]) > 1e-6 * symbol[-1]:
        raise ConsistencyError("Gram symbol factorization mismatch", n=n, leading=leading, gram=float(symbol[-1]))
    logger.info(f"Orthonormal constants computed for n={n}")
    return OrthoConstants(n, tuple(roots), beta, gamma, lambda_cap, tuple(float(x) for x in r + 1.0 / r))


@dataclass(frozen=True, eq=False)
class LambdaCoeffs:
    """
    Coefficients of ``prod_j (rho_j - 2 cos(omega/2))``.

    ``raw[k + m]`` is the Laurent coefficient of ``z**k`` in ``prod_j (rho_j - z - 1/z)``;
    ``cosine[j]`` are the ``lambda_j`` of ``sum_j (-1)**j lambda_j cos(j omega/2)``
    (``lambda_m = 2``); ``half_shift = scale * raw`` are the signed half-shift weights
    ``lambda_|k|(m) (-1)**|k|`` whose sum equals ``2**-m * Lambda_m``.
    """

    m: int
    raw: np.ndarray
    cosine: np.ndarray
    scale: float
    half_shift: np.ndarray

    @property
    def raw_sum(self):
        return float(np.sum(self.raw))


@lru_cache(maxsize=None)
def lambda_coeffs(m):
    """
    Expansion of ``prod_j [rho_j - 2 cos(omega/2)]`` into half-shift coefficients.

    Parameters
    ----------
    m : int
        Order of the companion factor, ``m >= 1``.

    Returns
    -------
    LambdaCoeffs
        Raw, cosine and normalized half-shift coefficients.

    Raises
    ------
    ConsistencyError
        If the normalized alternating sum misses ``2**-m * Lambda_m`` by more than 1e-10.

    Notes
    -----
    The raw coefficients sum to ``prod_j (rho_j - 2) = prod_j (1 - r_j)**2 / r_j``;
    ``scale = prod_j (1 + r_j) / (1 - r_j)`` brings the sum to
    ``prod_j (1 - r_j**2) / r_j = 2**-m * Lambda_m``.

    Examples
    --------
    >>> coeffs = lambda_coeffs(1)
    >>> [round(c, 6) for c in coeffs.raw]
    [-1.0, 4.0, -1.0]
    """
    if m < 1:
        raise PreconditionError("companion order must be >= 1", m=m)
    consts = euler_constants(m)
    raw = np.array([1.0])
    for rho in consts.rho:
        raw = np.convolve(raw, np.array([-1.0, rho, -1.0]))
    cosine = np.empty(m + 1)
    cosine[0] = raw[m]
    for j in range(1, m + 1):
        cosine[j] = (-1) ** j * 2.0 * raw[m + j]
    target = 2.0 ** (-m) * consts.lambda_cap
    scale = target / float(np.sum(raw))
    half_shift = scale * raw
    if abs(math.fsum(half_shift) - target) > 1e-10 * max(1.0, abs(target)):
        raise ConsistencyError("alternating lambda sum mismatch", m=m, value=math.fsum(half_shift), target=target)
    for arr in (raw, cosine, half_shift):
        arr.setflags(write=False)
    return LambdaCoeffs(m, raw, cosine, scale, half_shift)


def _check_tol(tol):
    if not tol > 0.0 or tol < MIN_TOL:
        raise PreconditionError("truncation tolerance too small for double precision", tol=tol, min_tol=MIN_TOL)


def _phi_length(consts, tol):
    # |c_k| <= beta * binom(k+n-1, n-1) * rmax**k
    n = consts.n
    rmax = max(consts.roots)
    log_beta = math.log(consts.beta)
    terms = []
    k = 0
    while True:
        log_t = log_beta + math.lgamma(k + n) - math.lgamma(n) - math.lgamma(k + 1) + k * math.log(rmax)
        terms.append(math.exp(log_t))
        ratio = (k + n) / (k + 1) * rmax
        if ratio < 1.0 and terms[-1] < tol * 1e-6:
            remainder = terms[-1] * ratio / (1.0 - ratio)
            break
        k += 1
    terms = np.array(terms)
    tails = np.cumsum(terms[::-1])[::-1] + remainder
    cmax = float(terms.max())
    for length in range(1, len(terms) + 1):
        tail = float(tails[length]) if length < len(terms) else remainder
        if tail * (2.0 * cmax + tail) < tol:
            return length, tail
    return len(terms), remainder


def phi(n, tol=DEFAULT_TOL):
    """
    Orthonormal spline scaling function ``phi_n`` as a truncated B-spline series.

    Parameters
    ----------
    n : int
        Spline order.
    tol : float
        Bound on the effect of the neglected tail on inner products.

    Returns
    -------
    WaveletElement
        Coefficients ``c_k`` against ``B_n(. + k)``, ``k = 0..L-1``:
        ``beta_n`` times the convolution of the sequences ``(-r_j)**l``.

    Raises
    ------
    PreconditionError
        If ``tol`` is below ``MIN_TOL``.

    Examples
    --------
    >>> element = phi(1)
    >>> element.coeffs[0] == euler_constants(1).beta
    True
    """
    _check_tol(tol)
    consts = euler_constants(n)
    length, tail = _phi_length(consts, tol)
    coeffs = np.array([consts.beta])
    for r in consts.roots:
        coeffs = np.convolve(coeffs, (-r) ** np.arange(length))[:length]
    coeffs.setflags(write=False)
    logger.info(f"phi_{n}: {length} coefficients, tail bound {tail:.3e}")
    return WaveletElement(
        spec=SplineSystemSpec(n),
        kind="phi",
        coeffs=coeffs,
        first_shift=0,
        dilation_log2=0,
        support=(float(-(length - 1)), float(n + 1)),
        tail_bound=tail,
        extras={"length": length},
    )


def _psi_core(consts, depth):
    n = consts.n
    series, low = np.array([1.0]), 0
    for r in consts.roots:
        series, low = _laurent_mul(series, low, np.array([-1.0, 1.0 / r]), -1)
    differences = np.array([(-1) ** (n - p) * math.comb(n + 1, n - p) for p in range(-1, n + 1)], dtype=float)
    series, low = _laurent_mul(series, low, differences, -1)
    for r in consts.roots:
        backward = np.zeros(2 * depth + 1)
        backward[::2] = ((-r) ** np.arange(depth + 1))[::-1]
        series, low = _laurent_mul(series, low, backward, -2 * depth)
        forward = (-r) ** np.arange(depth + 1)
        series, low = _laurent_mul(series, low, forward, 0)
    return consts.gamma * series, low


def _psi_depth(consts, tol):
    n = consts.n
    r = np.array(consts.roots)
    prefactor = consts.gamma * float(np.prod(1.0 + 1.0 / r)) * 2.0 ** (n + 1)
    full = float(np.prod(1.0 / (1.0 - r) ** 2))
    total = prefactor * full
    for depth in range(1, 10000):
        lost = -math.expm1(2.0 * float(np.sum(np.log1p(-r ** (depth + 1)))))
        tail = total * lost
        if tail * (2.0 * total + tail) < tol:
            return depth, tail
    raise NumericFailure("psi truncation depth not reached", n=n, tol=tol)


def psi(n, s=0, tol=DEFAULT_TOL):
    """
    Battle-Lemarie wavelet ``psi_{n,s}`` as a truncated series against ``B_n(2x + h)``.

    Parameters
    ----------
    n : int
        Spline order.
    s : int
        Integer shift; ``psi_{n,s}(x) = psi_{n,0}(x - s)``.
    tol : float
        Bound on the effect of the neglected tails on inner products.

    Returns
    -------
    WaveletElement
        Level-1 coefficient sequence.

    Notes
    -----
    With ``z = exp(i omega / 2)`` the symbol of the coefficients is
    ``gamma_n * prod_j (1/r_j - 1/z) * sum_k (-1)**k binom(n+1, k) z**(n-k)
    * prod_j 1/(1 + r_j z**-2) * prod_j 1/(1 + r_j z)``; each geometric factor is kept to
    ``depth`` terms.
    """
    _check_tol(tol)
    consts = euler_constants(n)
    depth, tail = _psi_depth(consts, tol)
    coeffs, low = _psi_core(consts, depth)
    coeffs.setflags(write=False)
    first_shift = low - 2 * int(s)
    upper = (n + 1 - first_shift) / 2.0
    lower = -(first_shift + len(coeffs) - 1) / 2.0
    return WaveletElement(
        spec=SplineSystemSpec(n, s=s),
        kind="psi",
        coeffs=coeffs,
        first_shift=first_shift,
        dilation_log2=1,
        support=(lower, upper),
        tail_bound=tail,
        extras={"depth": depth},
    )


def bspline_element(n, tau=0):
    """``B_n(. - tau)`` as a one-term level-0 element."""
    return WaveletElement(
        spec=SplineSystemSpec(n),
        kind="bspline",
        coeffs=np.array([1.0]),
        first_shift=-int(tau),
        dilation_log2=0,
        support=(float(tau), float(tau + n + 1)),
    )


def _refined(element, level):
    coeffs = np.asarray(element.coeffs, dtype=float)
    first = element.first_shift
    n = element.spec.n
    for _ in range(element.dilation_log2, level):
        # B_n(y + h) = sum_k c_k B_n(2y + 2h - k)
        two_scale = two_scale_coeffs(n)
        expanded = np.zeros(2 * len(coeffs) - 1)
        expanded[::2] = coeffs
        coeffs = np.convolve(expanded, two_scale[::-1])
        first = 2 * first - (n + 1)
    return coeffs, first


def element_inner(e1, e2):
    """
    Inner product of two series elements of the same order via Gram values.

    Both elements are refined to the finer of their dilation levels with the two-scale
    relation; at level ``j`` the pairing of ``B_n(2**j x + h)`` and ``B_n(2**j x + h')`` is
    ``2**-j * <B_n, B_n(. - (h - h'))>``.
    """
    if e1.spec.n != e2.spec.n:
        raise PreconditionError("elements of different orders", n1=e1.spec.n, n2=e2.spec.n)
    n = e1.spec.n
    level = max(e1.dilation_log2, e2.dilation_log2)
    a, fa = _refined(e1, level)
    b, fb = _refined(e2, level)
    gram = gram_row(n)
    correlated = np.convolve(b, gram)
    offset = fa - fb + n
    idx = offset + np.arange(len(a))
    valid = (idx >= 0) & (idx < len(correlated))
    products = a[valid] * correlated[idx[valid]]
    return 2.0 ** (-level) * math.fsum(products)


def capital_phi(n, a=0):
    """
    Localized scaling function ``Phi_{n,a} = B_n(. - a)``.

    Parameters
    ----------
    n : int
        Spline order.
    a : {0, 1/2, -1/2}
        Half-integer origin.

    Returns
    -------
    WaveletElement
        Exact element with support ``[a, a+n+1]``; ``extras["alpha_prime"]`` holds the
        expansion coefficients against ``phi_n`` shifts (elementary symmetric polynomials
        of the roots, ordered ``kappa = -n..0``).

    Examples
    --------
    >>> capital_phi(2, Fraction(1, 2)).support
    (Fraction(1, 2), Fraction(7, 2))
    """
    spec = SplineSystemSpec(n, a=a)
    consts = euler_constants(n)
    symmetric = np.array([1.0])
    for r in consts.roots:
        symmetric = np.convolve(symmetric, np.array([1.0, r]))
    alpha_prime = symmetric[::-1].copy()
    if abs(math.fsum(alpha_prime) - consts.beta) > 1e-12 * consts.beta:
        raise ConsistencyError("sum of expansion coefficients differs from beta", n=n)
    coeffs = two_scale_coeffs(n)
    first_shift = int(-2 * spec.a) - (n + 1)
    element = WaveletElement(
        spec=spec,
        kind="capital_phi",
        coeffs=coeffs,
        first_shift=first_shift,
        dilation_log2=1,
        support=(spec.a, spec.a + n + 1),
        extras={"alpha_prime": alpha_prime},
    )
    func = element.as_piecewise()
    return WaveletElement(**{**element.__dict__, "func": func})


def psi_expansion_coeffs(n):
    """
    Coefficients ``alpha''_k`` (``k = -n..n``) with ``Psi_{n,0,0} = gamma_n**-1 sum_k alpha''_k psi_n(. + k)``.

    They are the Laurent coefficients of ``prod_j (1 + r_j w**-1)(1 - r_j**2 w)``.
    """
    consts = euler_constants(n)
    series, low = np.array([1.0]), 0
    for r in consts.roots:
        series, low = _laurent_mul(series, low, np.array([r, 1.0]), -1)
        series, low = _laurent_mul(series, low, np.array([1.0, -r * r]), 0)
    return series


def _psi_local_coeffs(n):
    # Psi_{n,0,0}(x) = sum_h p_h B_n(2x + h), h = -n-1 .. 2n
    raw = lambda_coeffs(n).raw
    differences = np.array([(-1) ** (n - p) * math.comb(n + 1, n - p) for p in range(-1, n + 1)], dtype=float)
    series, low = _laurent_mul(np.asarray(raw), -n, differences, -1)
    return series, low


def _check_support(element):
    actual = element.func.support
    lo, hi = element.support
    if actual is None or Fraction(actual[0]) != lo or Fraction(actual[1]) != hi:
        raise ConsistencyError("element support differs from its closed form", kind=element.kind,
                               expected=(str(lo), str(hi)), actual=actual)


def capital_psi(n, a=0, s=0):
    """
    Localized wavelet ``Psi_{n,a,s}``.

    Parameters
    ----------
    n : int
        Spline order.
    a : {0, 1/2, -1/2}
        Half-integer origin.
    s : int
        Integer shift.

    Returns
    -------
    WaveletElement
        Exact element ``sum_k mu_k sum_l (-1)**l binom(n+1, l) B_n(2(x - a - s) + n - l + k)``
        with ``mu`` the raw coefficients of ``prod_j (rho_j - z - 1/z)``; support
        ``[s+a-n, s+a+n+1]``. ``extras["alpha_second"]`` holds the expansion against
        ``psi_n`` shifts and ``extras["lambda_check"]`` the value of
        ``gamma_n**-1 * sum(alpha'')`` (equal to ``Lambda_n``).

    Raises
    ------
    ConsistencyError
        If the support or the expansion-sum identity fails.
    """
    spec = SplineSystemSpec(n, a=a, s=s)
    consts = euler_constants(n)
    coeffs, low = _psi_local_coeffs(n)
    alpha_second = psi_expansion_coeffs(n)
    lambda_check = math.fsum(alpha_second) / consts.gamma
    if abs(lambda_check - consts.lambda_cap) > 1e-10 * consts.lambda_cap:
        raise ConsistencyError("expansion sum differs from Lambda_n", n=n, value=lambda_check,
                               lambda_cap=consts.lambda_cap)
    first_shift = low - int(2 * spec.a) - 2 * spec.s
    element = WaveletElement(
        spec=spec,
        kind="capital_psi",
        coeffs=coeffs,
        first_shift=first_shift,
        dilation_log2=1,
        support=(spec.s + spec.a - n, spec.s + spec.a + n + 1),
        extras={"alpha_second": alpha_second, "lambda_check": lambda_check},
    )
    element = WaveletElement(**{**element.__dict__, "func": element.as_piecewise()})
    _check_support(element)
    return element


def _half_shift_combination(coeffs, first_shift, weights, half_width):
    # sum_k w_k F(x - k/2), k = -half_width..half_width, for F = sum_i c_i B(2x + first + i)
    combined = np.convolve(coeffs, np.asarray(weights, dtype=float)[::-1])
    return combined, first_shift - half_width


def generalized_psi(spec):
    """
    Generalized localized wavelet ``Psi_{n,a,s;m(k),alpha(zeta)}``.

    Parameters
    ----------
    spec : SplineSystemSpec
        Family parameters.

    Returns
    -------
    WaveletElement
        ``k_flag = 1`` applies ``sum_k lambda_|k|(m) (-1)**|k| Psi(. - k/2)``;
        ``zeta_flag = 1`` applies ``sum_i (-1)**i binom(2 alpha, i) Psi(. - i/2 + alpha/2)``.
        Support ``[s+a-n-m k/2-alpha zeta/2, s+a+n+1+m k/2+alpha zeta/2]``.

    Examples
    --------
    >>> element = generalized_psi(SplineSystemSpec(2, m=1, k_flag=1))
    >>> element.support
    (Fraction(-5, 2), Fraction(7, 2))
    """
    base = capital_psi(spec.n, spec.a, spec.s)
    if not spec.k_flag and not spec.zeta_flag:
        return WaveletElement(**{**base.__dict__, "spec": spec, "kind": "generalized_psi"})
    coeffs, first = np.asarray(base.coeffs), base.first_shift
    extras = dict(base.extras)
    if spec.k_flag:
        lam = lambda_coeffs(spec.m)
        coeffs, first = _half_shift_combination(coeffs, first, lam.half_shift, spec.m)
        extras["lambda_scale"] = lam.scale
    if spec.zeta_flag:
        differences = [(-1) ** i * math.comb(2 * spec.alpha, i) for i in range(2 * spec.alpha + 1)]
        coeffs, first = _half_shift_combination(coeffs, first, differences, spec.alpha)
    lo, hi = base.support
    element = WaveletElement(
        spec=spec,
        kind="generalized_psi",
        coeffs=coeffs,
        first_shift=first,
        dilation_log2=1,
        support=(lo - spec.radius, hi + spec.radius),
        extras=extras,
    )
    element = WaveletElement(**{**element.__dict__, "func": element.as_piecewise()})
    _check_support(element)
    return element


def system_elements(spec):
    """Scaling element ``Phi_{n,a}`` and wavelet element of the family ``spec``."""
    return capital_phi(spec.n, spec.a), generalized_psi(spec)


@dataclass(frozen=True)
class ThetaReport:
    n_star: int
    m_star: int
    formula: float
    inner_product: float
    coefficient_product: float
    scale: float
    s_bar: int
    a_bar: Fraction
    quoted_s_bar: int
    overlaps: int
    tau0: int

    def as_dict(self):
        return {
            "n_star": self.n_star,
            "m_star": self.m_star,
            "formula": self.formula,
            "inner_product": self.inner_product,
            "coefficient_product": self.coefficient_product,
            "scale": self.scale,
            "s_bar": self.s_bar,
            "a_bar": str(self.a_bar),
            "quoted_s_bar": self.quoted_s_bar,
            "overlaps": self.overlaps,
            "tau0": self.tau0,
        }


def _overlap_pairs(e1, e2):
    n = e1.spec.n
    h1 = e1.first_shift + np.nonzero(e1.coeffs)[0]
    h2 = e2.first_shift + np.nonzero(e2.coeffs)[0]
    pairs = []
    for i in h1:
        for j in h2:
            if abs(int(i) - int(j)) <= n:
                pairs.append((int(i), int(j)))
    return pairs


def single_overlap_offset(n_star, m_star):
    """
    Split ``(a_bar, s_bar)`` of the offset ``s_bar + a_bar = -(4n* + 1 + m*)/2``.

    Examples
    --------
    >>> single_overlap_offset(1, 2)
    (Fraction(-1, 2), -3)
    """
    offset2 = -(4 * n_star + 1 + m_star)
    if offset2 % 2:
        return Fraction(-1, 2), (offset2 + 1) // 2
    return Fraction(0), offset2 // 2


def theta_overlap(n_star, m_star, tau0=0):
    """
    Overlap constant ``Theta(n*) = 16 * B_{n*} / (gamma_{m*} gamma_{n*})`` next to the
    defining inner product of the dilated elements.

    Parameters
    ----------
    n_star, m_star : int
        Orders, both ``>= 1``.
    tau0 : int
        Position of the inner product.

    Returns
    -------
    ThetaReport
        ``formula`` is ``Theta(n*)``; ``inner_product`` the raw
        ``<F(./2 - tau0), G(./2 - tau0)>`` of the elements as built here;
        ``coefficient_product`` the product of the two B-spline coefficients meeting in
        the single overlap; ``scale = inner_product / formula`` the factor between the
        two normalizations of ``Psi``.

    Raises
    ------
    ConsistencyError
        If more than one B-spline overlap is detected or the inner product differs from
        ``coefficient_product * B_{n*}`` by more than 1e-8.

    Notes
    -----
    1. The offset of the generalized element is ``s_bar + a_bar = -(4n* + 1 + m*)/2``; in
       the argument of ``B_{n*}(2 .)`` this is the quoted shift ``-1 - m* - 4n*``.
    2. Its rightmost B-spline then meets the leftmost B-spline of ``Psi_{n*,0,0}`` at
       distance ``n*``, so ``<F(./2 - tau0), G(./2 - tau0)> = e * B_{n*}``.
    3. Elements are built without the ``gamma_n`` prefactor, so ``scale`` is
       ``e * gamma_{m*} gamma_{n*} / 16`` rather than 1; the value is reported, not
       forced.
    """
    if n_star < 1 or m_star < 1:
        raise PreconditionError("theta_overlap needs n*, m* >= 1", n_star=n_star, m_star=m_star)
    overlap = b_intersection(n_star)
    gamma_n = euler_constants(n_star).gamma
    gamma_m = euler_constants(m_star).gamma
    formula = 16.0 * overlap / (gamma_m * gamma_n)
    a_bar, s_bar = single_overlap_offset(n_star, m_star)
    spec = SplineSystemSpec(n_star, a=a_bar, s=s_bar, m=m_star, k_flag=1)
    shifted = generalized_psi(spec)
    base = capital_psi(n_star, 0, 0)
    pairs = _overlap_pairs(shifted, base)
    if len(pairs) != 1 or abs(pairs[0][0] - pairs[0][1]) != n_star:
        raise ConsistencyError("single-overlap configuration not reached", n_star=n_star, m_star=m_star,
                               pairs=pairs)
    h1, h2 = pairs[0]
    product = float(shifted.coeffs[h1 - shifted.first_shift] * base.coeffs[h2 - base.first_shift])
    inner = pp_inner(
        pp_transform(shifted.func, shift=tau0, dilation_log2=-1),
        pp_transform(base.func, shift=tau0, dilation_log2=-1),
    )
    expected = product * overlap
    if abs(inner - expected) > 1e-8 * max(1.0, abs(expected)):
        raise ConsistencyError("inner product is not a single B-spline overlap", inner_product=inner,
                               expected=expected)
    scale = inner / formula
    logger.info(f"Theta({n_star}) = {formula:.6g}, inner product {inner:.6g}, scale {scale:.6g}")
    return ThetaReport(n_star, m_star, formula, inner, product, scale, s_bar, a_bar,
                       -1 - m_star - 4 * n_star, len(pairs), tau0)

"""Lacunary trigonometric series: collapsed node sums and pointwise evaluation.

Every basis function of a trigonometric Hermite spline is a series

    sum_m  w(m) * trig(nu_m t) / nu_m**s

over an arithmetic progression of frequencies ``nu_m = step*m + offset``.
At the nodes of the matching uniform grid the trigonometric factor collapses
to ``cos(k t_j)`` or ``sin(k t_j)`` (up to a sign that depends on m only), so
the series reduces to a scalar constant times a low harmonic. This module
computes those constants (Euler-Maclaurin accelerated) and evaluates the
series at arbitrary points by honest truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import PreconditionError, SingularSystemError

__all__ = [
    "FrequencyFamily",
    "LacunarySumSpec",
    "SeriesTable",
    "SumResult",
    "PLUS",
    "MINUS",
    "residue_class",
    "collapsed_sum",
    "basis_eval",
    "series_terms_needed",
    "tail_integral",
    "series_constants_c1",
    "series_constants_c2",
    "check_grid_size",
]

# Explicit terms before the Euler-Maclaurin tail takes over.
_EM_START = 32
# Hard cap on explicit terms for pointwise evaluation.
MAX_TERMS = 10**6
_EPS = float(np.finfo(float).eps)
# Relative determinant threshold for the per-harmonic systems.
DET_RTOL = 1e-12


def check_grid_size(N):
    """Raise PreconditionError unless N is an odd integer >= 3."""
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)):
        raise PreconditionError(f"grid size must be an integer, got {N!r}")
    if N < 3 or N % 2 == 0:
        raise PreconditionError(f"grid size must be odd and >= 3, got {N}")
    return int(N)


@dataclass(frozen=True)
class FrequencyFamily:
    """An arithmetic progression of frequencies with optional (-1)**m weights.

    ``order=1`` families are selected by ``"plus"`` (``m*N + k``, m >= 0) or
    ``"minus"`` (``m*N - k``, m >= 1). ``order=2`` families are residue
    classes ``r`` in {0, 1, 2} with frequencies ``(3m + r)*N + k``, m >= 0.
    """

    order: int
    selector: object
    alternating: bool = False

    def __post_init__(self):
        if self.order == 1:
            if self.selector not in ("plus", "minus"):
                raise PreconditionError(f"order-1 selector must be 'plus' or 'minus', got {self.selector!r}")
        elif self.order == 2:
            if self.selector not in (0, 1, 2):
                raise PreconditionError(f"order-2 selector must be a residue 0, 1 or 2, got {self.selector!r}")
            if self.alternating:
                raise PreconditionError("alternating weights apply to order-1 families only")
        else:
            raise PreconditionError(f"order must be 1 or 2, got {self.order!r}")

    @property
    def first_index(self):
        return 1 if self.selector == "minus" else 0

    def step(self, N):
        return N if self.order == 1 else 3 * N

    def offset(self, N, k):
        if self.selector == "plus":
            return k
        if self.selector == "minus":
            return -k
        return self.selector * N + k

    def frequency(self, N, k, m):
        return self.step(N) * m + self.offset(N, k)

    def weight(self, m):
        if self.alternating:
            return 1.0 - 2.0 * (np.asarray(m) % 2)
        return np.ones_like(np.asarray(m), dtype=float)

    def with_alternating(self, alternating):
        return FrequencyFamily(self.order, self.selector, bool(alternating))


PLUS = FrequencyFamily(1, "plus")
MINUS = FrequencyFamily(1, "minus")


def residue_class(r):
    return FrequencyFamily(2, r)


@dataclass(frozen=True)
class LacunarySumSpec:
    """Parameters of one collapsed sum ``sum_m w(m) / nu_m**s``."""

    family: FrequencyFamily
    s: int
    N: int
    k: int

    def __post_init__(self):
        check_grid_size(self.N)
        allowed = (2, 3) if self.family.order == 1 else (2, 3, 4)
        if self.s not in allowed:
            raise PreconditionError(f"exponent {self.s} not allowed for order {self.family.order}; expected one of {allowed}")
        n = (self.N - 1) // 2
        if not 1 <= self.k <= n:
            raise PreconditionError(f"harmonic index k={self.k} outside 1..{n}")

    @property
    def step(self):
        return self.family.step(self.N)

    @property
    def offset(self):
        return self.family.offset(self.N, self.k)


class SumResult(NamedTuple):
    value: float
    n_terms: int
    remainder_bound: float
    tail_integral: float


def tail_integral(step, offset, first_index, q, n_terms):
    """Closed-form bound on ``sum_{m >= first_index+n_terms} nu_m**-q``.

    Uses ``nu(m) <= integral over [m-1, m]`` for the decreasing summand.
    """
    if q <= 1:
        return math.inf
    y = step * (first_index + n_terms - 1) + offset
    if y <= 0:
        return math.inf
    return y ** (1 - q) / (step * (q - 1))


def _em_tail(a, b, s, x0):
    """Euler-Maclaurin estimate of sum_{m>=x0} (a m + b)**-s.

    Keeps the f/2, f' and f''' corrections; the f^(5) term bounds the
    remainder because the summand is completely monotone.
    """
    y = a * x0 + b
    integral = y ** (1 - s) / (a * (s - 1))
    f0 = y**-s
    d1 = -s * a * y ** (-s - 1)
    d3 = -s * (s + 1) * (s + 2) * a**3 * y ** (-s - 3)
    d5 = -s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * a**5 * y ** (-s - 5)
    tail = integral + 0.5 * f0 - d1 / 12.0 + d3 / 720.0
    return tail, abs(d5) / 30240.0


def _collapsed(a, b, m0, s, alternating, tol):
    n_explicit = _EM_START
    while True:
        if not alternating:
            terms = [(a * m + b) ** -s for m in range(m0, m0 + n_explicit)]
            tail, rem = _em_tail(a, b, s, m0 + n_explicit)
            value = math.fsum(terms) + tail
        else:
            sign = 1.0 if m0 % 2 == 0 else -1.0
            terms = [sign * (-1.0) ** i * (a * (m0 + i) + b) ** -s for i in range(n_explicit)]
            # pairs (m0+2i, m0+2i+1) form a completely monotone sequence in i
            pairs = n_explicit // 2
            t_even, r_even = _em_tail(2 * a, a * m0 + b, s, pairs)
            t_odd, r_odd = _em_tail(2 * a, a * (m0 + 1) + b, s, pairs)
            value = math.fsum(terms) + sign * (t_even - t_odd)
            rem = r_even + r_odd
        # stop at the requested tolerance or at working precision, whichever is tighter
        if rem <= 0.5 * min(tol, _EPS * abs(value)) or n_explicit >= 2**16:
            return value, n_explicit, rem
        n_explicit *= 2


def collapsed_sum(spec, tol=1e-15, full_output=False):
    """Sum ``sum_m w(m) / nu_m**s`` over the family of ``spec``.

    Parameters
    ----------
    spec : LacunarySumSpec
    tol : float
        Absolute error target, at least 1e-15. Summation also continues
        until the remainder is below half an ulp of the value, so small
        sums come out to working precision.
    full_output : bool
        If true return a :class:`SumResult` with the explicit term count,
        the Euler-Maclaurin remainder bound and the integral tail bound of
        the explicit partial sum.
    """
    if not tol >= 1e-15:
        raise PreconditionError(f"tol must be >= 1e-15, got {tol!r}")
    fam = spec.family
    value, n_terms, rem = _collapsed(
        float(spec.step), float(spec.offset), fam.first_index, spec.s, fam.alternating, tol
    )
    if not full_output:
        return value
    bound = tail_integral(spec.step, spec.offset, fam.first_index, spec.s, n_terms)
    return SumResult(value, n_terms, rem, bound)


def series_terms_needed(step, offset, first_index, q, tol, max_terms=MAX_TERMS):
    """Smallest term count whose oscillation-blind tail bound is <= tol (capped)."""
    if q <= 1:
        return max_terms
    y_needed = (step * (q - 1) * tol) ** (-1.0 / (q - 1))
    m = math.ceil((y_needed - offset) / step - first_index + 1)
    return int(min(max(m, 1), max_terms))


ACCEL_ORDER = 3


def _rising(q, j):
    return math.prod(range(q, q + j))


def oscillation_tail(step, offset, first_index, q, n_terms, theta, order=0):
    """Bound on the remainder of ``sum_m nu_m**-q exp(i m theta)`` past ``n_terms`` terms.

    With ``order = 0`` this is Abel's bound: partial sums of ``exp(i m theta)``
    stay below ``1/|sin(theta/2)|`` and the weights decrease, so the tail is
    at most the first omitted weight over ``|sin(theta/2)|``. With ``order = j``
    it bounds what is left after the ``j`` summation-by-parts corrections of
    :func:`lacunary_eval` (``accel_order=j``): the j-th difference of the
    completely monotone weights over ``|sin(theta/2)| * |1 - z|**j``.
    Infinite where ``theta`` is a multiple of 2*pi.
    """
    sh = np.abs(np.sin(0.5 * np.asarray(theta, dtype=float)))
    nu = step * (first_index + np.asarray(n_terms, dtype=float)) + offset
    num = _rising(q, order) * float(step) ** order * nu ** -float(q + order)
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(sh > 0, num / np.maximum(sh * (2.0 * sh) ** order, 1e-300), np.inf)


def oscillation_terms_needed(step, offset, first_index, q, tol, theta, max_terms=MAX_TERMS, order=0):
    """Per-``theta`` term counts for which :func:`oscillation_tail` is <= tol (capped)."""
    sh = np.abs(np.sin(0.5 * np.asarray(theta, dtype=float)))
    c = _rising(q, order) * float(step) ** order
    with np.errstate(divide="ignore", over="ignore"):
        nu = (c / (tol * sh * (2.0 * sh) ** order)) ** (1.0 / (q + order))
    m = np.ceil((np.minimum(nu, 1e300) - offset) / step - first_index)
    return np.clip(m, 1, max_terms).astype(np.int64)


def _tail_corrections(step, first_index, offsets, q, n_terms, tt, order, alternating):
    """Leading summation-by-parts terms of the tails, shape (len(tt), len(offsets)).

    For weights ``a_m`` and ``z = exp(i step t)`` the tail from ``M`` on is
    ``sum_{i<order} (nabla^i a)_{M+i} z**(M+i) / (1-z)**(i+1)`` plus a
    remainder bounded by :func:`oscillation_tail`.
    """
    M = first_index + n_terms
    z = np.exp(1j * step * tt)
    if alternating:
        z = -z
    m = M + np.arange(order)
    a = (step * m[:, None] + offsets[None, :]) ** -float(q)
    out = np.zeros((tt.size, offsets.size), dtype=complex)
    inv = 1.0 / (1.0 - z)
    # same phase arithmetic as the explicit terms
    zpow = np.exp(1j * tt * float(step * M)) * ((-1.0) ** M if alternating else 1.0)
    for i in range(order):
        d = np.diff(a[: i + 1], n=i, axis=0)[0]
        out += (zpow * inv ** (i + 1))[:, None] * d[None, :]
        zpow = zpow * z
    return out


def lacunary_eval(step, first_index, offsets, coefs, s, deriv, t, n_terms, alternating=False, accel_order=0):
    """Evaluate ``Re sum_k coefs[k] sum_m w(m) (i nu)**deriv nu**-s exp(i nu t)``.

    ``nu = step*m + offsets[k]`` for m = first_index .. first_index+n_terms-1.
    With ``accel_order > 0`` the leading summation-by-parts estimates of the
    tails are added (only sensible away from ``step*t`` = 0 mod 2*pi; see
    :func:`oscillation_tail` for the remainder). Vectorized over ``t``;
    returns an array of ``t``'s shape.
    """
    t = np.asarray(t, dtype=float)
    shape = t.shape
    tt = np.mod(t.ravel(), 2.0 * np.pi)
    offsets = np.asarray(offsets, dtype=float)
    coefs = np.asarray(coefs, dtype=complex)
    acc = np.zeros((tt.size, offsets.size), dtype=complex)
    factor = 1j**deriv
    if accel_order:
        acc += factor * _tail_corrections(step, first_index, offsets, s - deriv, n_terms, tt, accel_order, alternating)
    block = max(1, min(n_terms, (1 << 21) // max(tt.size * offsets.size, 1)))
    # smallest terms first; numpy's pairwise reduction inside each block
    for start in reversed(range(0, n_terms, block)):
        m = first_index + np.arange(start, min(start + block, n_terms))
        nu = step * m[:, None] + offsets[None, :]
        w = factor * nu ** float(deriv - s)
        if alternating:
            w = w * (1.0 - 2.0 * (m % 2))[:, None]
        phase = np.exp(1j * np.outer(tt, step * m.astype(float)))
        acc += (phase[:, None, :] * w.T[None, :, :]).sum(axis=-1)
    acc *= np.exp(1j * np.outer(tt, offsets))
    return (acc @ coefs).real.reshape(shape)


def basis_eval(family, s, N, k, t, deriv=0, tol=1e-12, kind="cos", max_terms=MAX_TERMS, full_output=False):
    """Evaluate one lacunary basis function (or a term-wise derivative) at ``t``.

    ``kind`` selects ``cos`` or ``sin`` series. The series is truncated once
    the oscillation-blind tail bound ``sum nu**-(s-deriv)`` drops below
    ``tol``; the term count is capped at ``max_terms``, in which case the
    achieved (larger) bound is what ``full_output`` reports.

    Returns
    -------
    value : float or ndarray
    bound : float
        Only when ``full_output`` is true.
    """
    N = check_grid_size(N)
    q = s - deriv
    if deriv not in (0, 1, 2):
        raise PreconditionError(f"deriv must be 0, 1 or 2, got {deriv!r}")
    if q < 1:
        raise PreconditionError(f"s - deriv = {q} < 1: the differentiated series diverges")
    min_tol = 1e-15 if q >= 3 else 1e-8 if q == 2 else 0.0
    if not tol >= min_tol or tol <= 0:
        raise PreconditionError(f"tol={tol!r} below the minimum {min_tol} for s - deriv = {q}")
    if not 1 <= k <= (N - 1) // 2:
        raise PreconditionError(f"harmonic index k={k} outside 1..{(N - 1) // 2}")
    if kind not in ("cos", "sin"):
        raise PreconditionError(f"kind must be 'cos' or 'sin', got {kind!r}")
    step, off, m0 = family.step(N), family.offset(N, k), family.first_index
    n_terms = series_terms_needed(step, off, m0, q, tol, max_terms)
    coef = 1.0 if kind == "cos" else -1j
    value = lacunary_eval(step, m0, [off], [coef], s, deriv, t, n_terms, family.alternating)
    if np.ndim(value) == 0:
        value = float(value)
    if full_output:
        return value, tail_integral(step, off, m0, q, n_terms)
    return value


@dataclass(frozen=True, eq=False)
class SeriesTable:
    """Collapsed node constants for one (N, grid variant, order).

    ``g[f, i, k-1]`` holds the signed sum for family ``f`` (order 1:
    0 = plus, 1 = minus; order 2: residue class r) and exponent
    ``exponents[i]``. Variant-1 tables carry the (-1)**m weights. ``det`` and
    ``scale`` are the per-harmonic system determinant and the product of its
    row norms.
    """

    N: int
    variant: int
    order: int
    exponents: tuple
    g: np.ndarray
    det: np.ndarray
    scale: np.ndarray

    @property
    def n(self):
        return (self.N - 1) // 2

    def get(self, family, s):
        return self.g[family, self.exponents.index(s)]

    def matrix(self, k):
        """Order-2 system matrix G(k): rows s = 4, 3, 2; columns r = 0, 1, 2."""
        if self.order != 2:
            raise PreconditionError("matrix(k) is defined for order-2 tables only")
        return np.array([[self.get(r, s)[k - 1] for r in range(3)] for s in (4, 3, 2)])

    def check_determinants(self):
        bad = np.nonzero(~(np.abs(self.det) > DET_RTOL * self.scale))[0]
        if bad.size:
            k = int(bad[0]) + 1
            raise SingularSystemError(
                f"per-harmonic system singular at k={k} (N={self.N}, order={self.order}): "
                f"|det|={abs(self.det[k - 1]):.3e}, scale={self.scale[k - 1]:.3e}",
                k,
            )


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=256)
def series_constants_c1(N, variant=0, tol=1e-15):
    """Constants of the C1 spline on grid variant 0 or 1.

    Raises SingularSystemError if some per-harmonic determinant is
    numerically zero.
    """
    N = check_grid_size(N)
    if variant not in (0, 1):
        raise PreconditionError(f"grid variant must be 0 or 1, got {variant!r}")
    n = (N - 1) // 2
    exps = (2, 3)
    g = np.empty((2, 2, n))
    for f, fam in enumerate((PLUS, MINUS)):
        fam = fam.with_alternating(variant == 1)
        for i, s in enumerate(exps):
            for k in range(1, n + 1):
                g[f, i, k - 1] = collapsed_sum(LacunarySumSpec(fam, s, N, k), tol)
    gp2, gp3, gm2, gm3 = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    det = gp3 * gm2 + gm3 * gp2
    scale = np.hypot(gp3, gm3) * np.hypot(gp2, gm2)
    table = SeriesTable(N, variant, 1, exps, _readonly(g), _readonly(det), _readonly(scale))
    table.check_determinants()
    return table


@lru_cache(maxsize=256)
def series_constants_c2(N, tol=1e-15):
    """Constants of the C2 spline (grid variant 0 only)."""
    N = check_grid_size(N)
    n = (N - 1) // 2
    exps = (2, 3, 4)
    g = np.empty((3, 3, n))
    for r in range(3):
        fam = residue_class(r)
        for i, s in enumerate(exps):
            for k in range(1, n + 1):
                g[r, i, k - 1] = collapsed_sum(LacunarySumSpec(fam, s, N, k), tol)
    mats = np.stack([g[:, 2, :].T, g[:, 1, :].T, g[:, 0, :].T], axis=1)  # (n, 3 rows s=4,3,2, 3 cols r)
    det = np.linalg.det(mats)
    scale = np.prod(np.linalg.norm(mats, axis=2), axis=1)
    table = SeriesTable(N, 0, 2, exps, _readonly(g), _readonly(det), _readonly(scale))
    table.check_determinants()
    return table

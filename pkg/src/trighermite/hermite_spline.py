"""Trigonometric Hermite splines of class C1 and C2 on uniform periodic grids.

The C1 spline (grid variants 0 and 1) is

    a00/2 + sum_k [a0_k C0(k,t) + b0_k S0(k,t) + a1_k C1(k,t) + b1_k S1(k,t)]

with ``C0/S0`` summing frequencies ``mN + k`` (m >= 0) and ``C1/S1`` summing
``mN - k`` (m >= 1), all with weight ``nu**-3``. The C2 spline (variant 0)
uses the three residue classes ``(3m + r)N + k`` with weight ``nu**-4``.
Because every basis function collapses to ``const * cos(k t_j)`` or
``const * sin(k t_j)`` at the nodes, the interpolation conditions decouple
into one small system per harmonic k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import PreconditionError, SingularSystemError
from .series_kernels import (
    DET_RTOL,
    MINUS,
    PLUS,
    ACCEL_ORDER,
    MAX_TERMS,
    lacunary_eval,
    oscillation_tail,
    oscillation_terms_needed,
    residue_class,
    series_constants_c1,
    series_constants_c2,
    series_terms_needed,
    tail_integral,
)
from .trig_interp import SampleSet, UniformGrid, center_samples, interp_coeffs

__all__ = [
    "MeanLedger",
    "HermiteSpline",
    "ResidualReport",
    "build_c1",
    "build_c2",
    "build",
    "evaluate",
    "eval_uniform",
    "node_values",
    "node_residuals",
]


@dataclass(frozen=True)
class MeanLedger:
    """Means removed from the derivative samples before interpolation.

    They are added back to derivative evaluations only; spline values are
    unaffected.
    """

    mu1: float = 0.0
    mu2: float = 0.0

    def contribution(self, deriv):
        return (0.0, self.mu1, self.mu2)[deriv]


@dataclass(frozen=True, eq=False)
class HermiteSpline:
    """Immutable trigonometric Hermite spline.

    ``a[i]`` and ``b[i]`` are the cosine and sine coefficients of basis
    family i (order 1: plus, minus; order 2: residue classes 0, 1, 2),
    indexed by harmonic ``k - 1``. ``tol`` is the accuracy the collapsed
    constants were computed to.
    """

    order: int
    grid: UniformGrid
    a00: float
    a: np.ndarray
    b: np.ndarray
    ledger: MeanLedger = MeanLedger()
    tol: float = 1e-15

    def __post_init__(self):
        if self.order not in (1, 2):
            raise PreconditionError(f"spline order must be 1 or 2, got {self.order!r}")
        if self.order == 2 and self.grid.variant != 0:
            raise PreconditionError("the C2 spline is defined on grid variant 0 only")
        shape = (self.order + 1, self.grid.n)
        for name in ("a", "b"):
            arr = np.array(getattr(self, name), dtype=float).reshape(shape)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "a00", float(self.a00))

    @property
    def table(self):
        if self.order == 1:
            return series_constants_c1(self.grid.N, self.grid.variant, self.tol)
        return series_constants_c2(self.grid.N, self.tol)

    @property
    def base_exponent(self):
        return 3 if self.order == 1 else 4

    def families(self):
        if self.order == 1:
            return (PLUS, MINUS)
        return tuple(residue_class(r) for r in range(3))

    def coefficient_vector(self):
        """All coefficients as one flat vector: a00, then a, then b."""
        return np.concatenate([[self.a00], self.a.ravel(), self.b.ravel()])

    def __call__(self, t, deriv=0, tol=None):
        return evaluate(self, t, deriv, tol)


def _check_pair(f, df, grid):
    if f.deriv_order != 0 or df.deriv_order != 1:
        raise PreconditionError("expected value samples (order 0) and first-derivative samples (order 1)")
    if f.grid != df.grid:
        raise PreconditionError(f"sample grids differ: {f.grid} vs {df.grid}")
    if grid is not None and grid != f.grid:
        raise PreconditionError(f"samples live on {f.grid}, not on {grid}")
    return f.grid


def build_c1(f, df, grid=None, tol=1e-15):
    """Build the C1 spline matching ``f`` and ``df`` at the nodes.

    The derivative samples are centered; their mean goes to the ledger.
    Each harmonic k solves two 2x2 systems by Cramer's rule,

        cosine:  gP3 a0 + gM3 a1 = A0_k,   -gP2 a0 + gM2 a1 = B1_k
        sine:    gP3 b0 - gM3 b1 = B0_k,    gP2 b0 + gM2 b1 = A1_k

    where ``gP*``/``gM*`` are the plus/minus collapsed sums for exponent 3
    (values) and 2 (derivatives) on the grid's variant.
    """
    grid = _check_pair(f, df, grid)
    if not tol >= 1e-15:
        raise PreconditionError(f"tol must be >= 1e-15, got {tol!r}")
    table = series_constants_c1(grid.N, grid.variant, tol)
    dfc, mu1 = center_samples(df)
    T0, T1 = interp_coeffs(f), interp_coeffs(dfc)
    gp2, gp3 = table.get(0, 2), table.get(0, 3)
    gm2, gm3 = table.get(1, 2), table.get(1, 3)
    det = table.det
    a0 = (T0.A * gm2 - gm3 * T1.B) / det
    a1 = (gp3 * T1.B + gp2 * T0.A) / det
    b0 = (T0.B * gm2 + gm3 * T1.A) / det
    b1 = (gp3 * T1.A - gp2 * T0.B) / det
    return HermiteSpline(1, grid, T0.A0, np.array([a0, a1]), np.array([b0, b1]), MeanLedger(mu1, 0.0), tol)


def build_c2(f, df, d2f, grid=None, tol=1e-15):
    """Build the C2 spline matching values, first and second derivatives.

    Per harmonic, ``G(k) @ (a0, a1, a2) = (A0_k, -B1_k, -A2_k)`` and
    ``G(k) @ (b0, b1, b2) = (B0_k, A1_k, -B2_k)`` where ``G(k)`` has rows
    ``g[r][4]``, ``g[r][3]``, ``g[r][2]``.
    """
    grid = _check_pair(f, df, grid)
    if d2f.deriv_order != 2 or d2f.grid != grid:
        raise PreconditionError("expected second-derivative samples on the same grid")
    if grid.variant != 0:
        raise PreconditionError("the C2 spline is defined on grid variant 0 only")
    if not tol >= 1e-15:
        raise PreconditionError(f"tol must be >= 1e-15, got {tol!r}")
    table = series_constants_c2(grid.N, tol)
    dfc, mu1 = center_samples(df)
    d2fc, mu2 = center_samples(d2f)
    T0, T1, T2 = interp_coeffs(f), interp_coeffs(dfc), interp_coeffs(d2fc)
    G = np.array([table.matrix(k) for k in range(1, grid.n + 1)])
    rhs_a = np.stack([T0.A, -T1.B, -T2.A], axis=1)
    rhs_b = np.stack([T0.B, T1.A, -T2.B], axis=1)
    a = np.linalg.solve(G, rhs_a[..., None])[..., 0].T
    b = np.linalg.solve(G, rhs_b[..., None])[..., 0].T
    return HermiteSpline(2, grid, T0.A0, a, b, MeanLedger(mu1, mu2), tol)


def build(samples, tol=1e-15):
    """Build a C1 or C2 spline from a sequence of 2 or 3 sample sets."""
    if len(samples) == 2:
        return build_c1(*samples, tol=tol)
    if len(samples) == 3:
        return build_c2(*samples, tol=tol)
    raise PreconditionError(f"expected 2 or 3 sample sets, got {len(samples)}")


def node_values(spline, deriv=0):
    """Spline (derivative) values at the grid nodes via the collapsed constants."""
    _check_deriv(spline, deriv)
    table = spline.table
    k = np.arange(1, spline.grid.n + 1)
    kt = np.outer(spline.grid.nodes, k)
    a, b = spline.a, spline.b
    if spline.order == 1:
        gp, gm = table.get(0, 3 - deriv), table.get(1, 3 - deriv)
        if deriv == 0:
            C, S = gp * a[0] + gm * a[1], gp * b[0] - gm * b[1]
        else:
            C, S = gp * b[0] + gm * b[1], -gp * a[0] + gm * a[1]
    else:
        g = np.stack([table.get(r, 4 - deriv) for r in range(3)])
        ga, gb = np.sum(g * a, axis=0), np.sum(g * b, axis=0)
        C, S = ((ga, gb), (gb, -ga), (-ga, -gb))[deriv]
    vals = np.cos(kt) @ C + np.sin(kt) @ S
    if deriv == 0:
        vals = vals + 0.5 * spline.a00
    return vals + spline.ledger.contribution(deriv)


def _check_deriv(spline, deriv):
    if deriv not in range(spline.order + 1):
        raise PreconditionError(f"deriv must be in 0..{spline.order} for an order-{spline.order} spline, got {deriv!r}")


def _resolve_tol(spline, deriv, tol):
    q = spline.base_exponent - deriv
    if tol is None:
        return 1e-12 if q >= 3 else 1e-8
    min_tol = 1e-15 if q >= 3 else 1e-8
    if not tol >= min_tol:
        raise PreconditionError(f"tol={tol!r} below the minimum {min_tol} for this derivative order")
    return float(tol)


def _series_plan(spline, deriv, tol):
    """Per-family (step, m0, offsets, coefs, n_terms) plus the total tail bound."""
    N, n = spline.grid.N, spline.grid.n
    s = spline.base_exponent
    q = s - deriv
    per_series = tol / (2 * len(spline.families()) * n)
    plan, bound = [], 0.0
    k = np.arange(1, n + 1)
    for i, fam in enumerate(spline.families()):
        step, m0 = fam.step(N), fam.first_index
        offsets = fam.offset(N, k)
        n_terms = max(series_terms_needed(step, int(o), m0, q, per_series) for o in offsets)
        coefs = spline.a[i] - 1j * spline.b[i]
        for o, c in zip(offsets, coefs):
            bound += abs(c) * tail_integral(step, int(o), m0, q, n_terms)
        plan.append((step, m0, offsets, coefs, n_terms))
    return plan, bound


# floor on the term count of accelerated points: cheap, and it pushes the
# remainder far below the requested tolerance away from nodes
_ACCEL_MIN_TERMS = 512


def _eval_points(spline, deriv, tol, tt):
    """Series path at off-node points; returns values and the worst tail bound.

    Per point, each family's series is either truncated plainly under the
    oscillation-blind integral bound, or (when that needs more terms)
    truncated earlier with summation-by-parts tail corrections whose
    remainder bound blows up only near nodes. Points are grouped by
    (mode, term count rounded up to a power of two), one kernel call each.
    """
    plan, _ = _series_plan(spline, deriv, tol)
    q = spline.base_exponent - deriv
    per_series = tol / (2 * len(plan) * spline.grid.n)
    vals = np.zeros(tt.shape)
    bound = np.zeros(tt.shape)
    for step, m0, offsets, coefs, n_blind in plan:
        theta = step * tt
        n_acc = np.ones(tt.shape, dtype=np.int64)
        for o in offsets:
            n_o = oscillation_terms_needed(step, int(o), m0, q, per_series, theta, MAX_TERMS, ACCEL_ORDER)
            n_acc = np.maximum(n_acc, n_o)
        n_acc = np.maximum(n_acc, min(_ACCEL_MIN_TERMS, n_blind))
        accel = n_acc < n_blind
        need = np.where(accel, n_acc, n_blind)
        buckets = np.minimum(2 ** np.ceil(np.log2(need)).astype(np.int64), n_blind)
        for mode in (False, True):
            for n_terms in np.unique(buckets[accel == mode]):
                sel = (buckets == n_terms) & (accel == mode)
                order = ACCEL_ORDER if mode else 0
                vals[sel] += lacunary_eval(
                    step, m0, offsets, coefs, spline.base_exponent, deriv, tt[sel], int(n_terms), accel_order=order
                )
                for o, c in zip(offsets, coefs):
                    if mode:
                        tail = oscillation_tail(step, int(o), m0, q, int(n_terms), theta[sel], ACCEL_ORDER)
                    else:
                        tail = tail_integral(step, int(o), m0, q, int(n_terms))
                    bound[sel] += abs(c) * tail
    return vals, float(bound.max(initial=0.0))


def evaluate(spline, t, deriv=0, tol=None, full_output=False):
    """Evaluate the spline or one of its derivatives at arbitrary ``t``.

    Points on a grid node use the collapsed constants (exact up to the
    build tolerance). Other points sum each basis series until a rigorous
    tail bound meets ``tol / (number of series)``: either the
    oscillation-blind integral bound, or, where cheaper, the remainder
    bound after three summation-by-parts tail corrections (which grows
    near nodes). Term counts are capped at a million. With
    ``full_output`` the largest total tail bound over the points is
    returned as well; it exceeds ``tol * sum|coef|`` only when the cap was
    hit.
    """
    _check_deriv(spline, deriv)
    tol = _resolve_tol(spline, deriv, tol)
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    out = np.empty(flat.shape)
    idx = spline.grid.node_index(flat)
    on = idx >= 0
    bound = 0.0
    if on.any():
        out[on] = node_values(spline, deriv)[idx[on]]
    if (~on).any():
        vals, bound = _eval_points(spline, deriv, tol, np.mod(flat[~on], 2.0 * np.pi))
        if deriv == 0:
            vals += 0.5 * spline.a00
        out[~on] = vals + spline.ledger.contribution(deriv)
    out = out.reshape(t.shape)
    if out.ndim == 0:
        out = float(out)
    return (out, bound) if full_output else out


def eval_uniform(spline, resolution, deriv=0, tol=None):
    """Evaluate at ``t_r = 2*pi*r/resolution`` by folding frequencies onto an FFT.

    Same truncation as :func:`evaluate`, in O(terms + R log R). Returns
    ``(t, values)``.
    """
    _check_deriv(spline, deriv)
    if resolution < 2:
        raise PreconditionError(f"resolution must be >= 2, got {resolution!r}")
    tol = _resolve_tol(spline, deriv, tol)
    R = int(resolution)
    s = spline.base_exponent
    plan, _ = _series_plan(spline, deriv, tol)
    bins = np.zeros(R, dtype=complex)
    for step, m0, offsets, coefs, n_terms in plan:
        chunk = max(1, (1 << 22) // len(offsets))
        for start in reversed(range(0, n_terms, chunk)):
            m = m0 + np.arange(start, min(start + chunk, n_terms))[::-1]
            nu = step * m[:, None] + offsets[None, :]
            w = (1j**deriv) * nu ** float(deriv - s) * coefs[None, :]
            idx = np.mod(nu, R).astype(np.int64).ravel()
            bins += np.bincount(idx, weights=w.real.ravel(), minlength=R)
            bins += 1j * np.bincount(idx, weights=w.imag.ravel(), minlength=R)
    vals = (np.fft.ifft(bins) * R).real
    if deriv == 0:
        vals += 0.5 * spline.a00
    vals += spline.ledger.contribution(deriv)
    t = 2.0 * np.pi * np.arange(R) / R
    idx = spline.grid.node_index(t)
    on = idx >= 0
    if on.any():
        vals[on] = node_values(spline, deriv)[idx[on]]
    return t, vals


class ResidualReport(NamedTuple):
    """Absolute node residuals per derivative order (index = order)."""

    per_node: tuple
    max: tuple
    scale: float

    @property
    def worst(self):
        return max(self.max)

    def passes(self, rtol):
        return self.worst <= rtol * self.scale


def node_residuals(spline, f, df, d2f=None):
    """Compare the spline's node values with the given samples."""
    samples = [f, df] + ([d2f] if d2f is not None else [])
    if len(samples) != spline.order + 1:
        raise PreconditionError(f"order-{spline.order} spline needs {spline.order + 1} sample sets")
    per_node = []
    for q, smp in enumerate(samples):
        if not isinstance(smp, SampleSet) or smp.deriv_order != q:
            raise PreconditionError(f"sample set {q} must hold derivative order {q}")
        if smp.grid != spline.grid:
            raise PreconditionError(f"sample grid {smp.grid} does not match spline grid {spline.grid}")
        per_node.append(np.abs(node_values(spline, q) - smp.values))
    scale = max([1.0] + [float(np.max(np.abs(smp.values))) for smp in samples])
    return ResidualReport(tuple(per_node), tuple(float(r.max()) for r in per_node), scale)


def determinant_health(table):
    """Smallest ``|det| / scale`` over the harmonics of a series table."""
    return float(np.min(np.abs(table.det) / table.scale))


__all__ += ["determinant_health", "DET_RTOL", "SingularSystemError"]

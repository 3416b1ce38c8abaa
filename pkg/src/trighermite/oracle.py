"""Brute-force cross-checks for the series constants and the spline solves.

Nothing here uses the node-collapse identities or the per-harmonic systems:
``brute_sum`` adds terms one by one and brackets the remainder, and the
collocation solvers evaluate every basis function at every node from its
explicit terms, then solve the full interpolation system by least squares.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import PreconditionError, TrigHermiteError
from .hermite_spline import HermiteSpline, MeanLedger
from .series_kernels import MINUS, PLUS, residue_class

__all__ = [
    "brute_sum",
    "node_basis_matrix",
    "collocation_solve_c1",
    "collocation_solve_c2",
    "CollocationResult",
    "fd_derivative",
]

DEFAULT_TERMS = 2048
_RICHARDSON_LEVELS = 6


def brute_sum(spec, M):
    """Explicit sum of the first ``M`` terms plus a rigorous remainder bracket.

    Returns ``(partial, tail_low, tail_high)``: the full series lies in
    ``[partial + tail_low, partial + tail_high]``. Non-alternating
    remainders are bracketed by integrals of the decreasing summand,
    alternating ones by zero and the first omitted term.
    """
    if M < 1:
        raise PreconditionError(f"M must be >= 1, got {M}")
    fam = spec.family
    a, b, m0, s = float(spec.step), float(spec.offset), fam.first_index, spec.s
    m = np.arange(m0, m0 + M, dtype=float)
    terms = (a * m + b) ** -s * fam.weight(m.astype(np.int64))
    partial = math.fsum(terms.tolist())
    x = m0 + M
    nxt = (a * x + b) ** -s
    if fam.alternating:
        nxt *= 1.0 if x % 2 == 0 else -1.0
        return partial, min(0.0, nxt), max(0.0, nxt)
    integral = (a * x + b) ** (1 - s) / (a * (s - 1))
    return partial, integral, integral + nxt


def _richardson(partials):
    """Extrapolate partial sums taken at M, M/2, M/4, ... to M -> infinity.

    ``partials[i]`` is the sum of the first ``M / 2**(L-1-i)`` terms; the
    error is assumed to expand in integer powers of 1/M. Returns the
    estimate and the change of the last elimination step.
    """
    row = list(partials)
    prev_best = row[-1]
    best = row[-1]
    for j in range(1, len(row)):
        factor = 2.0**j - 1.0
        row = [row[i + 1] + (row[i + 1] - row[i]) / factor for i in range(len(row) - 1)]
        prev_best, best = best, row[-1]
    return best, np.abs(best - prev_best)


def _column(fam, s, N, k, kind, deriv, nodes, M):
    """One basis function (term-wise derivative) at all nodes, from explicit terms."""
    m = fam.first_index + np.arange(M)
    nu = (fam.step(N) * m + fam.offset(N, k)).astype(float)
    theta = np.outer(nu, nodes)
    # d^q/dt^q of cos / sin as a phase shift by q*pi/2
    shift = deriv * np.pi / 2.0
    trig = np.cos(theta + shift) if kind == "cos" else np.sin(theta + shift)
    terms = trig * (nu ** float(deriv - s))[:, None]
    csum = np.cumsum(terms, axis=0)
    levels = [M // 2**i for i in range(_RICHARDSON_LEVELS - 1, -1, -1)]
    return _richardson([csum[L - 1] for L in levels])


def node_basis_matrix(order, grid, M=DEFAULT_TERMS):
    """Collocation matrix of an order-``order`` spline on ``grid``.

    Rows are node values, then first (and second) derivatives at the nodes.
    Columns are the constant ``1/2`` followed by cosine blocks (family
    major, harmonic minor) and then sine blocks, matching
    :meth:`HermiteSpline.coefficient_vector`. Returns the matrix and the
    largest extrapolation error estimate over all entries.
    """
    if M % (2**_RICHARDSON_LEVELS) != 0:
        raise PreconditionError(f"M must be a multiple of {2**_RICHARDSON_LEVELS}, got {M}")
    N, n, nodes = grid.N, grid.n, grid.nodes
    fams = (PLUS, MINUS) if order == 1 else tuple(residue_class(r) for r in range(3))
    s = 3 if order == 1 else 4
    rows = order + 1
    cols = [np.concatenate([np.full(N, 0.5), np.zeros(order * N)])]
    err = 0.0
    for kind in ("cos", "sin"):
        for fam in fams:
            for k in range(1, n + 1):
                parts = []
                for q in range(rows):
                    v, e = _column(fam, s, N, k, kind, q, nodes, M)
                    parts.append(v)
                    err = max(err, float(np.max(e)))
                cols.append(np.concatenate(parts))
    return np.column_stack(cols), err


class CollocationResult(NamedTuple):
    coefficients: np.ndarray
    residual_norm: float
    rank: int
    truncation_error: float

    def as_spline(self, order, grid, ledger=MeanLedger()):
        c = self.coefficients
        m = (order + 1) * grid.n
        return HermiteSpline(order, grid, c[0], c[1 : 1 + m], c[1 + m :], ledger)


def _solve(order, grid, samples, M):
    A, err = node_basis_matrix(order, grid, M)
    if err > 1e-12:
        raise TrigHermiteError(f"basis truncation error estimate {err:.2e} exceeds 1e-12; increase M")
    rhs = np.concatenate([smp.values for smp in samples])
    colnorm = np.linalg.norm(A, axis=0)
    x, _, rank, _ = np.linalg.lstsq(A / colnorm, rhs, rcond=None)
    if rank < A.shape[1]:
        raise TrigHermiteError(
            f"collocation matrix has rank {rank} < {A.shape[1]} columns: more dependencies than expected"
        )
    coef = x / colnorm
    return CollocationResult(coef, float(np.linalg.norm(A @ coef - rhs)), int(rank), err)


def collocation_solve_c1(f, df, grid=None, M=DEFAULT_TERMS):
    """Least-squares solve of the 2N x (4n+1) node system of the C1 spline.

    ``df`` is used as given; if it is not centered the system is
    inconsistent and the residual norm shows it.
    """
    grid = grid or f.grid
    if f.grid != grid or df.grid != grid:
        raise PreconditionError("samples and grid disagree")
    return _solve(1, grid, (f, df), M)


def collocation_solve_c2(f, df, d2f, grid=None, M=DEFAULT_TERMS):
    """Least-squares solve of the 3N x (6n+1) node system of the C2 spline."""
    grid = grid or f.grid
    if grid.variant != 0:
        raise PreconditionError("the C2 spline is defined on grid variant 0 only")
    if any(smp.grid != grid for smp in (f, df, d2f)):
        raise PreconditionError("samples and grid disagree")
    return _solve(2, grid, (f, df, d2f), M)


def fd_derivative(fn, t, h):
    """Central difference ``(fn(t+h) - fn(t-h)) / (2h)``."""
    if not h > 0:
        raise PreconditionError(f"h must be positive, got {h!r}")
    return (fn(t + h) - fn(t - h)) / (2.0 * h)

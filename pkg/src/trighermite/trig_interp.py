"""Uniform periodic grids, node samples and discrete trigonometric interpolation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .series_kernels import check_grid_size

__all__ = [
    "UniformGrid",
    "SampleSet",
    "TrigPolyCoeffs",
    "make_grid",
    "interp_coeffs",
    "eval_trig_poly",
    "center_samples",
]


@dataclass(frozen=True)
class UniformGrid:
    """N = 2n + 1 equispaced nodes on [0, 2*pi).

    Variant 0 starts at 0; variant 1 is shifted by half a spacing.
    """

    N: int
    variant: int = 0

    def __post_init__(self):
        object.__setattr__(self, "N", check_grid_size(self.N))
        if self.variant not in (0, 1):
            raise PreconditionError(f"grid variant must be 0 or 1, got {self.variant!r}")

    @property
    def n(self):
        return (self.N - 1) // 2

    @property
    def nodes(self):
        j = np.arange(1, self.N + 1)
        if self.variant == 0:
            return 2.0 * np.pi * (j - 1) / self.N
        return np.pi * (2 * j - 1) / self.N

    def node_index(self, t, atol=1e-12):
        """Index (0-based) of the node ``t`` sits on modulo 2*pi, else -1."""
        t = np.asarray(t, dtype=float)
        x = np.mod(t, 2.0 * np.pi) * self.N / (2.0 * np.pi) - 0.5 * self.variant
        j = np.rint(x)
        on = np.abs(x - j) * (2.0 * np.pi / self.N) <= atol
        return np.where(on, np.mod(j, self.N).astype(int), -1)


def make_grid(N, variant=0):
    return UniformGrid(N, variant)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Values of f or of its ``deriv_order``-th derivative at the grid nodes."""

    grid: UniformGrid
    deriv_order: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.deriv_order not in (0, 1, 2):
            raise PreconditionError(f"derivative order must be 0, 1 or 2, got {self.deriv_order!r}")
        v = np.array(self.values, dtype=float).ravel()
        if v.size != self.grid.N:
            raise PreconditionError(f"expected {self.grid.N} sample values, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise PreconditionError("sample values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def mean(self):
        return float(np.mean(self.values))

    @classmethod
    def from_function(cls, grid, fn, deriv_order=0):
        return cls(grid, deriv_order, fn(grid.nodes))


@dataclass(frozen=True, eq=False)
class TrigPolyCoeffs:
    """Coefficients of ``T(t) = A0/2 + sum_k (A[k] cos kt + B[k] sin kt)``."""

    A0: float
    A: np.ndarray
    B: np.ndarray
    deriv_order: int = 0

    @property
    def n(self):
        return len(self.A)


def interp_coeffs(samples, method="direct"):
    """Interpolation coefficients of the degree-n trigonometric polynomial.

    ``method="direct"`` is the O(N**2) reference transform; ``"fft"`` uses
    ``numpy.fft`` and agrees with it to rounding.
    """
    grid = samples.grid
    v = samples.values
    N, n = grid.N, grid.n
    if method == "direct":
        # fold node pairs t and 2*pi - t so parity of the data survives exactly
        k = np.arange(1, n + 1)
        if grid.variant == 0:
            lo, hi, mid = v[1 : n + 1], v[N - 1 : n : -1], v[0]
            cm = np.ones(n)
        else:
            lo, hi, mid = v[:n], v[N - 1 : n : -1], v[n]
            cm = (-1.0) ** k
        kt = np.outer(k, grid.nodes[1 : n + 1] if grid.variant == 0 else grid.nodes[:n])
        A = (2.0 / N) * (np.cos(kt) @ (lo + hi) + cm * mid)
        B = (2.0 / N) * (np.sin(kt) @ (lo - hi))
    elif method == "fft":
        c = np.fft.fft(v)[1 : n + 1]
        if grid.variant == 1:
            c = c * np.exp(-1j * np.pi * np.arange(1, n + 1) / N)
        A = (2.0 / N) * c.real
        B = -(2.0 / N) * c.imag
    else:
        raise PreconditionError(f"unknown method {method!r}")
    A0 = (2.0 / N) * float(np.sum(v))
    return TrigPolyCoeffs(A0, A, B, samples.deriv_order)


def eval_trig_poly(coeffs, t, deriv=0):
    """Value of the ``deriv``-th derivative of the interpolating polynomial."""
    t = np.asarray(t, dtype=float)
    k = np.arange(1, coeffs.n + 1)
    c = (np.asarray(coeffs.A) - 1j * np.asarray(coeffs.B)) * (1j * k) ** deriv
    val = (np.exp(1j * np.multiply.outer(t, k)) @ c).real if coeffs.n else np.zeros(t.shape)
    if deriv == 0:
        val = val + 0.5 * coeffs.A0
    return float(val) if val.ndim == 0 else val


def center_samples(samples):
    """Subtract the sample mean from derivative samples.

    Returns ``(centered, mu)``; the interpolant of ``centered`` has no
    constant term.
    """
    if samples.deriv_order < 1:
        raise PreconditionError("only derivative samples are centered")
    mu = samples.mean
    return SampleSet(samples.grid, samples.deriv_order, samples.values - mu), mu

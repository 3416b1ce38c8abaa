"""Built-in 2*pi-periodic test functions with exact derivatives."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .trig_interp import SampleSet

__all__ = ["TestFunction", "FUNCTIONS", "get_function", "sample"]


@dataclass(frozen=True)
class TestFunction:
    name: str
    derivatives: tuple  # f, f', f''

    def __call__(self, t, deriv=0):
        return self.derivatives[deriv](np.asarray(t, dtype=float))


def _const(t):
    return np.ones_like(t)


def _zero(t):
    return np.zeros_like(t)


def _exp_sin(t):
    return np.exp(np.sin(t))


def _exp_sin_1(t):
    return np.cos(t) * np.exp(np.sin(t))


def _exp_sin_2(t):
    return (np.cos(t) ** 2 - np.sin(t)) * np.exp(np.sin(t))


def _inv(t):
    return 1.0 / (2.0 + np.cos(t))


def _inv_1(t):
    return np.sin(t) / (2.0 + np.cos(t)) ** 2


def _inv_2(t):
    d = 2.0 + np.cos(t)
    return np.cos(t) / d**2 + 2.0 * np.sin(t) ** 2 / d**3


FUNCTIONS = {
    f.name: f
    for f in (
        TestFunction("const", (_const, _zero, _zero)),
        TestFunction("cos", (np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t))),
        TestFunction("sin2", (lambda t: np.sin(2 * t), lambda t: 2 * np.cos(2 * t), lambda t: -4 * np.sin(2 * t))),
        TestFunction("exp-sin", (_exp_sin, _exp_sin_1, _exp_sin_2)),
        TestFunction("inv-2-cos", (_inv, _inv_1, _inv_2)),
    )
}


def get_function(name):
    try:
        return FUNCTIONS[name]
    except KeyError:
        raise PreconditionError(f"unknown function {name!r}; choose from {', '.join(FUNCTIONS)}") from None


def sample(fn, grid, order):
    """Sample sets for orders 0..order of ``fn`` at the nodes of ``grid``."""
    if isinstance(fn, str):
        fn = get_function(fn)
    return [SampleSet(grid, q, fn(grid.nodes, q)) for q in range(order + 1)]

import numpy as np
import pytest

from trighermite import SampleSet, center_samples

_CRITERIA = []


@pytest.fixture
def record_criterion():
    """Collect one pass/fail line per acceptance criterion for the summary."""

    def record(number, title, passed, detail=""):
        line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        _CRITERIA.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_CRITERIA):
            terminalreporter.write_line(line)


def exp_sin(t, q=0):
    e = np.exp(np.sin(t))
    return (e, np.cos(t) * e, (np.cos(t) ** 2 - np.sin(t)) * e)[q]


def inv_2_cos(t, q=0):
    d = 2.0 + np.cos(t)
    return (1.0 / d, np.sin(t) / d**2, np.cos(t) / d**2 + 2.0 * np.sin(t) ** 2 / d**3)[q]


def samples_of(fn, grid, order):
    return [SampleSet(grid, q, fn(grid.nodes, q)) for q in range(order + 1)]


def centered(samples):
    return [samples[0]] + [center_samples(s)[0] for s in samples[1:]]


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def symmetric_nodes(grid):
    """The grid nodes written as angles in (-pi, pi], exactly negation-symmetric.

    Same points modulo 2*pi as ``grid.nodes``; since libm's cos/sin have exact
    parity, samples of even/odd functions taken here are exactly even/odd.
    """
    N = grid.N
    if grid.variant == 0:
        m = np.arange(N)
        m = np.where(m > grid.n, m - N, m)
        return 2.0 * np.pi * m / N
    r = 2 * np.arange(1, N + 1) - 1
    r = np.where(r > N, r - 2 * N, r)
    return np.pi * r / N


def symmetric_samples(fn, grid, order):
    t = symmetric_nodes(grid)
    return [SampleSet(grid, q, fn(t, q)) for q in range(order + 1)]

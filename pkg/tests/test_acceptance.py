"""Acceptance criteria; each test prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline;
they are also collected in the "acceptance criteria" summary section.
"""

import time

import numpy as np
import pytest

from trighermite import (
    MINUS,
    PLUS,
    LacunarySumSpec,
    SampleSet,
    build,
    collapsed_sum,
    eval_uniform,
    evaluate,
    make_grid,
    node_residuals,
    residue_class,
    series_constants_c1,
    series_constants_c2,
)
from trighermite.cli import converge_errors
from trighermite.hermite_spline import determinant_health
from trighermite.oracle import brute_sum, collocation_solve_c1, collocation_solve_c2, fd_derivative

from conftest import centered, exp_sin, inv_2_cos, samples_of, symmetric_samples

pytestmark = pytest.mark.acceptance

CONFIGS = [(1, 0), (1, 1), (2, 0)]
FUNCS = {"exp-sin": exp_sin, "inv-2-cos": inv_2_cos}
EPS = np.finfo(float).eps


def test_criterion_1_interpolation(record_criterion):
    start = time.perf_counter()
    worst = 0.0
    for fn in FUNCS.values():
        for N in (5, 9, 17):
            for order, variant in CONFIGS:
                smp = samples_of(fn, make_grid(N, variant), order)
                rep = node_residuals(build(smp), *smp)
                worst = max(worst, rep.worst / rep.scale)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 5.0
    assert record_criterion(1, "interpolation contract", ok, f"max residual/scale {worst:.2e}, {elapsed:.2f}s")


def test_criterion_2_oracle_equivalence(record_criterion):
    start = time.perf_counter()
    worst = 0.0
    for fn in FUNCS.values():
        for N in (5, 9, 17):
            for order, variant in CONFIGS:
                smp = samples_of(fn, make_grid(N, variant), order)
                closed = build(smp).coefficient_vector()
                solver = collocation_solve_c1 if order == 1 else collocation_solve_c2
                res = solver(*centered(smp))
                rel = np.max(np.abs(res.coefficients - closed)) / np.max(np.abs(closed))
                worst = max(worst, rel)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 10.0
    assert record_criterion(2, "oracle equivalence", ok, f"max relative difference {worst:.2e}, {elapsed:.2f}s")


def random_spec(rng):
    kind = rng.integers(0, 3)
    N = int(2 * rng.integers(1, 51) + 1)
    k = int(rng.integers(1, (N - 1) // 2 + 1))
    if kind == 2:
        return LacunarySumSpec(residue_class(int(rng.integers(0, 3))), int(rng.integers(2, 5)), N, k)
    fam = (PLUS, MINUS)[kind].with_alternating(bool(rng.integers(0, 2)))
    return LacunarySumSpec(fam, int(rng.integers(2, 4)), N, k)


def test_criterion_3_series_kernels(record_criterion):
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    failures, widest = [], 0.0
    for _ in range(20):
        spec = random_spec(rng)
        value = collapsed_sum(spec, tol=1e-15)
        partial, lo, hi = brute_sum(spec, 10**6)
        widest = max(widest, hi - lo)
        # a few ulps for the rounding of the two floating-point sums themselves
        slack = 8 * EPS * abs(partial)
        if not (partial + lo - slack <= value <= partial + hi + slack) or hi - lo > 1e-12:
            failures.append(spec)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10.0
    assert record_criterion(
        3, "series kernels inside brute brackets", ok, f"{20 - len(failures)}/20, widest {widest:.1e}, {elapsed:.2f}s"
    )


def test_criterion_4_constant_reproduction(record_criterion):
    worst = 0.0
    for c in (1.0, -2.5, 0.3):
        for N in (3, 5, 9, 17, 33):
            for order, variant in CONFIGS:
                g = make_grid(N, variant)
                smp = [SampleSet(g, q, np.full(N, c if q == 0 else 0.0)) for q in range(order + 1)]
                _, vals = eval_uniform(build(smp), 1024, 0, 1e-12)
                worst = max(worst, float(np.max(np.abs(vals - c))))
    ok = worst <= 1e-12
    assert record_criterion(4, "constant reproduction", ok, f"max deviation {worst:.1e} on 1024 points")


def _even(t, q=0):
    return inv_2_cos(t, q)


def _cos(t, q=0):
    return (np.cos(t), -np.sin(t), -np.cos(t))[q]


def _odd_ratio(t, q=0):
    # sin t / (2 + cos t)
    d = 2.0 + np.cos(t)
    s, c = np.sin(t), np.cos(t)
    return (
        s / d,
        (2 * c + 1) / d**2,
        (-2 * s * d + 2 * s * (2 * c + 1)) / d**3,
    )[q]


def _sin2(t, q=0):
    return (np.sin(2 * t), 2 * np.cos(2 * t), -4 * np.sin(2 * t))[q]


def test_criterion_5_symmetry(record_criterion):
    # samples taken at the nodes written as angles in (-pi, pi], so even/odd
    # data is exactly even/odd (see conftest.symmetric_nodes)
    worst = 0.0
    for N in (5, 9, 17):
        for order, variant in CONFIGS:
            g = make_grid(N, variant)
            for fn in (_even, _cos):
                worst = max(worst, float(np.max(np.abs(build(symmetric_samples(fn, g, order)).b))))
            for fn in (_odd_ratio, _sin2):
                sp = build(symmetric_samples(fn, g, order))
                worst = max(worst, abs(sp.a00), float(np.max(np.abs(sp.a))))
    ok = worst <= 1e-12
    assert record_criterion(5, "symmetry", ok, f"max vanishing coefficient {worst:.1e}")


def _smoothness_slope(order, variant, N, rng):
    g = make_grid(N, variant)
    sp = build(samples_of(exp_sin, g, order))
    # keep away from the singular points of the basis series (step*t = 0 mod 2*pi)
    step = sp.families()[0].step(N)
    cell = 2 * np.pi / step
    t = rng.integers(0, step, 100) * cell + cell * (0.25 + 0.5 * rng.uniform(size=100))
    exact, bound = evaluate(sp, t, order, tol=1e-8, full_output=True)
    exact = exact - sp.ledger.contribution(order)
    hs = np.array([1e-2, 1e-3, 1e-4])
    errs = []
    for h in hs:
        fd = fd_derivative(lambda x: evaluate(sp, x, order - 1, tol=1e-15), t, h)
        errs.append(float(np.max(np.abs(fd - exact))))
    slope = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
    return slope, errs, bound


def test_criterion_6_smoothness(record_criterion):
    rng = np.random.default_rng(6)
    parts, ok = [], True
    for order, variant in CONFIGS:
        slope, errs, bound = _smoothness_slope(order, variant, 9, rng)
        # the reference derivative must be far more accurate than the smallest error
        ok &= 1.8 <= slope <= 2.2 and bound <= 1e-3 * min(errs)
        parts.append(f"p={order} v={variant}: {slope:.3f}")
    assert record_criterion(6, "smoothness (central-difference order)", ok, ", ".join(parts))


def test_criterion_7_convergence_trend(record_criterion):
    ok, parts = True, []
    for order in (1, 2):
        errs = converge_errors("exp-sin", [5, 9, 17], order=order)
        ok &= errs[0] > errs[1] > errs[2]
        parts.append(f"p={order}: " + " > ".join(f"{e:.2e}" for e in errs))
    assert record_criterion(7, "convergence trend", ok, "; ".join(parts))


def test_criterion_8_determinant_health(record_criterion):
    worst = {}
    for order, variant in CONFIGS:
        health = []
        for N in range(3, 102, 2):
            table = series_constants_c1(N, variant) if order == 1 else series_constants_c2(N)
            table.check_determinants()
            health.append(determinant_health(table))
        worst[(order, variant)] = min(health)
    ok = all(h > 1e-12 for h in worst.values())
    detail = ", ".join(f"p={p} v={v}: {h:.2e}" for (p, v), h in worst.items())
    assert record_criterion(8, "determinant health (min |det|/scale)", ok, detail)


def test_criterion_9_centering_ledger(record_criterion):
    worst = 0.0
    for N in (5, 9, 17):
        for order, variant in CONFIGS:
            g = make_grid(N, variant)
            smp = samples_of(exp_sin, g, order)
            shifted = [smp[0]] + [SampleSet(g, q, s.values + 0.37 * q) for q, s in enumerate(smp) if q >= 1]
            sp = build(shifted)
            for q in range(1, order + 1):
                err = np.max(np.abs(evaluate(sp, g.nodes, q) - shifted[q].values))
                worst = max(worst, err / max(1.0, np.max(np.abs(shifted[q].values))))
    ok = worst <= 1e-8
    assert record_criterion(9, "centering ledger", ok, f"max relative node error {worst:.1e}")

from __future__ import annotations

import math

import numpy as np
import pytest

from casimir_networks.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, integrate, integrate_batch


def test_weights_integrate_constants():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, rel=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, rel=1e-15)


def test_nodes_symmetric_and_sorted():
    assert np.all(np.diff(NODES) > 0)
    assert NODES == pytest.approx(-NODES[::-1], abs=1e-16)


@pytest.mark.parametrize("degree", [0, 1, 5, 12, 22])
def test_kronrod_exact_for_polynomials(degree):
    got = KRONROD_WEIGHTS @ NODES**degree
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert got == pytest.approx(exact, abs=1e-15)


@pytest.mark.parametrize("degree", [0, 7, 13])
def test_gauss_exact_for_polynomials(degree):
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert GAUSS_WEIGHTS @ NODES**degree == pytest.approx(exact, abs=1e-15)


@pytest.mark.parametrize("func, a, b, exact", [
    (np.exp, 0.0, 1.0, math.e - 1),
    (np.sin, 0.0, math.pi, 2.0),
    (lambda x: x**3 * np.exp(-x), 0.0, 60.0, 6.0 * (1 - math.exp(-60) * (1 + 60 + 1800 + 36000))),
    (lambda x: 1 / (1 + x**2), -50.0, 50.0, 2 * math.atan(50.0)),
])
def test_adaptive_integration(func, a, b, exact):
    value, err, ok = integrate(func, a, b, rel_tol=1e-12)
    assert ok
    assert value == pytest.approx(exact, rel=1e-12)
    assert err <= 1e-12 * abs(value)


def test_breakpoint_at_kink():
    value, _, ok = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, rel_tol=1e-13, breakpoints=[0.3])
    assert ok and value == pytest.approx(0.29, rel=1e-14)


def test_non_convergence_is_flagged():
    _, _, ok = integrate(lambda x: np.sin(1 / (x + 1e-6)), 0.0, 1.0, rel_tol=1e-12, max_panels=4)
    assert not ok


def test_batch_matches_independent_integrations():
    scales = np.array([1.0, 2.0, 5.0])
    edges = [np.array([0.0, 1.0]), np.array([0.0, 0.5, 2.0]), np.array([0.0, 3.0])]
    res = integrate_batch(lambda pid, x: np.exp(-scales[pid] * x)[:, None], edges, rel_tol=1e-12)
    for i, e in enumerate(edges):
        exact = (1 - math.exp(-scales[i] * e[-1])) / scales[i]
        assert res.value[i, 0] == pytest.approx(exact, rel=1e-12)
    assert np.all(res.converged)


def test_batch_is_deterministic():
    f = lambda pid, x: np.column_stack([np.cos(x * (pid + 1)), x**2])
    edges = [np.array([0.0, 4.0])] * 3
    a = integrate_batch(f, edges, ncomp=2, rel_tol=1e-11)
    b = integrate_batch(f, edges, ncomp=2, rel_tol=1e-11)
    assert np.array_equal(a.value, b.value) and a.evaluations == b.evaluations


def test_integrand_error_is_propagated():
    f = lambda pid, x: (np.ones((len(x), 1)), np.full(len(x), 0.5))
    res = integrate_batch(f, [np.array([0.0, 2.0])])
    assert res.value[0, 0] == pytest.approx(2.0)
    assert res.inner_error[0] == pytest.approx(1.0)


def test_problem_order_does_not_change_results():
    rng = np.random.default_rng(7)
    scales = rng.uniform(0.5, 5.0, 12)
    edges = [np.array([0.0, 0.1, 1.0, 10.0]) for _ in scales]

    def run(order):
        s = scales[order]
        res = integrate_batch(lambda pid, x: (x**3 * np.exp(-s[pid] * x))[:, None], edges, rel_tol=1e-12)
        return res.value[np.argsort(order), 0]

    base = run(np.arange(12))
    for _ in range(5):
        assert np.abs(run(rng.permutation(12)) / base - 1).max() < 1e-13

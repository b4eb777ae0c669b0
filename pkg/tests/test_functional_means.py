"""Functional means on both backends, plus their symmetry/order checkers."""
import numpy as np
import pytest

from entropylab.grids import (GridError, GridFunctional, GridSpec,
                              QuadraticFunctional, sample_quadratic, INF)
from entropylab.functional_means import (
    func_arithmetic, func_harmonic, func_geometric, check_func_symmetry,
    check_pointwise_order, combine_conjugates, pl_conjugate_values)
from entropylab.grids import conjugate_pl

WIDE = GridSpec(-10.0, 10.0, 4001)


def quad(a):
    return QuadraticFunctional([[float(a)]])


def quad_on_grid(a, spec=WIDE):
    return sample_quadratic(quad(a), spec)


def window(f, lo=-2.0, hi=2.0):
    m = (f.x >= lo) & (f.x <= hi)
    return f.x[m], f.values[m]


# ---------------------------------------------------------------- quadratic backend

def test_quadratic_arithmetic():
    m = func_arithmetic(quad(1.0), quad(3.0), 0.5)
    assert abs(m.matrix[0, 0] - 2.0) < 1e-14


def test_quadratic_harmonic():
    m = func_harmonic(quad(1.0), quad(4.0), 0.5)
    assert abs(m.matrix[0, 0] - 1.6) < 1e-12


def test_quadratic_geometric():
    m = func_geometric(quad(1.0), quad(4.0), 0.5)
    assert abs(m.matrix[0, 0] - 2.0) < 1e-12
    eye = QuadraticFunctional(np.eye(3))
    same = func_geometric(eye, eye, 0.3)
    assert np.allclose(same.matrix, np.eye(3), atol=1e-12)


def test_boundary_weights_return_input():
    f, g = quad(1.0), quad(4.0)
    for mean in (func_arithmetic, func_harmonic, func_geometric):
        assert mean(f, g, 0.0) is f
        assert mean(f, g, 1.0) is g


def test_mixed_backends_rejected():
    f = quad_on_grid(1.0)
    with pytest.raises(GridError):
        func_arithmetic(f, quad(1.0), 0.5)
    other = quad_on_grid(1.0, GridSpec(-5.0, 5.0, 2001))
    with pytest.raises(GridError):
        func_harmonic(f, other, 0.5)
    with pytest.raises(GridError):
        func_geometric(quad(2.0), QuadraticFunctional(np.eye(2)), 0.5)


def test_nonconvex_quadratic_rejected():
    with pytest.raises(GridError):
        func_harmonic(quad(1.0), QuadraticFunctional([[-1.0]]), 0.5)


# ---------------------------------------------------------------- grid backend

def test_grid_arithmetic_keeps_infinities():
    f = GridFunctional(-1.0, 1.0, [INF, 1.0, 0.0, 1.0, 2.0])
    g = GridFunctional(-1.0, 1.0, [0.0, 1.0, 0.0, 1.0, INF])
    m = func_arithmetic(f, g, 0.5)
    assert m.values[0] == INF and m.values[-1] == INF
    assert abs(m.values[2]) < 1e-15 and abs(m.values[1] - 1.0) < 1e-15


def test_grid_harmonic_matches_quadratic_backend():
    f, g = quad_on_grid(1.0), quad_on_grid(4.0)
    h = func_harmonic(f, g, 0.5)
    x, vals = window(h)
    assert np.max(np.abs(vals - 0.5 * 1.6 * x * x)) <= 1e-5


def test_grid_geometric_matches_quadratic_backend():
    f, g = quad_on_grid(1.0), quad_on_grid(4.0)
    ge = func_geometric(f, g, 0.5, nodes=64)
    x, vals = window(ge)
    assert np.max(np.abs(vals - 0.5 * 2.0 * x * x)) <= 1e-4


def test_grid_geometric_idempotent_equal_inputs():
    # regression: equal operands once produced knot sets differing by ~1e-13,
    # and the slope-differencing noise shifted the conjugate by ~1e-3
    for a in (0.5, 2.0, 4.0):
        f = quad_on_grid(a)
        g = quad_on_grid(a)
        ge = func_geometric(f, g, 0.5, nodes=64)
        x, vals = window(ge)
        assert np.max(np.abs(vals - 0.5 * a * x * x)) <= 1e-6, a


def test_combine_conjugates_dedupes_knots():
    cf = conjugate_pl(quad_on_grid(2.0))
    cg = conjugate_pl(quad_on_grid(2.0))
    phi = combine_conjugates(cf, cg, 0.5, 0.5)
    gaps = np.diff(phi.knots)
    assert np.all(gaps > 1e-10 * (1.0 + np.abs(phi.knots[1:])))
    s = np.linspace(-2.0, 2.0, 101)
    back = pl_conjugate_values(phi, s)  # (f2*)* = f2 restricted to the grid
    assert np.max(np.abs(back - s * s)) <= 1e-9


def test_pl_conjugate_values_outside_slope_range():
    f = quad_on_grid(1.0, GridSpec(-1.0, 1.0, 201))  # slopes in [-1, 1]
    phi = combine_conjugates(conjugate_pl(f), conjugate_pl(f), 0.5, 0.5)
    out = pl_conjugate_values(phi, np.array([-5.0, 0.0, 5.0]))
    assert out[0] == INF and out[2] == INF and np.isfinite(out[1])


def test_grid_harmonic_is_convex():
    rng = np.random.default_rng(17)
    from entropylab.suites import random_convex_grid
    spec = GridSpec(-4.0, 4.0, 201)
    for _ in range(10):
        f = random_convex_grid(rng, spec)
        g = random_convex_grid(rng, spec)
        h = func_harmonic(f, g, float(rng.uniform(0.1, 0.9)))
        assert h.is_convex()


# ---------------------------------------------------------------- checkers

def test_symmetry_checker_both_backends():
    assert check_func_symmetry(quad(1.0), quad(4.0), 0.3).passed
    f, g = quad_on_grid(1.0), quad_on_grid(4.0)
    rec = check_func_symmetry(f, g, 0.3, tol=1e-7)
    assert rec.passed, rec.margins
    assert rec.instance["backend"] == "grid"


def test_symmetry_checker_random_grid_pairs():
    rng = np.random.default_rng(23)
    from entropylab.suites import random_convex_grid
    spec = GridSpec(-4.0, 4.0, 201)
    for _ in range(10):
        f = random_convex_grid(rng, spec)
        g = random_convex_grid(rng, spec)
        p = float(rng.uniform(0.05, 0.95))
        rec = check_func_symmetry(f, g, p, tol=1e-7)
        assert rec.passed, (p, rec.margins)


def test_order_checker_both_backends():
    assert check_pointwise_order(quad(1.0), quad(4.0), 0.5).passed
    f, g = quad_on_grid(1.0), quad_on_grid(4.0)
    rec = check_pointwise_order(f, g, 0.5)
    assert rec.passed, rec.margins
    assert rec.margins["harmonic_leq_geometric"] >= 0.0
    assert rec.margins["geometric_leq_arithmetic"] >= 0.0


def test_order_checker_random_grid_pairs():
    rng = np.random.default_rng(29)
    from entropylab.suites import random_convex_grid
    spec = GridSpec(-4.0, 4.0, 201)
    for _ in range(10):
        f = random_convex_grid(rng, spec)
        g = random_convex_grid(rng, spec)
        for p in (0.1, 0.5, 0.9):
            rec = check_pointwise_order(f, g, p)
            assert rec.passed, (p, rec.margins)

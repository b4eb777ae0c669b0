"""Functional entropies on both backends and the theorem checkers.

Scalar oracles: for f_a(x) = a x^2 / 2 the quadratic backend must reproduce
the closed forms a ln(b/a), (a^(1-p) b^p - a)/p and a (b/a)^p ln(b/a) in the
coefficient.
"""
import numpy as np
import pytest

from entropylab.grids import (GridError, GridFunctional, GridSpec,
                              QuadraticFunctional, sample_quadratic, INF)
from entropylab.functional_entropy import (
    func_relative_entropy, func_tsallis, func_tsallis_conj, tsallis_conj_at,
    func_parametric, check_tsallis_conj_bounds, check_skew_symmetry, check_entropy_sandwich,
    check_entropy_sandwich_batch, check_parametric_sandwich_at, check_parametric_sandwich_batch,
    check_gradient_sandwich)
from entropylab.operator_entropy import check_parametric_sandwich
from entropylab.matrices import PDMatrix, random_spd
from entropylab.suites import random_convex_grid

WIDE = GridSpec(-10.0, 10.0, 4001)


def quad(a):
    return QuadraticFunctional([[float(a)]])


def quad_on_grid(a, spec=WIDE):
    return sample_quadratic(quad(a), spec)


def coeff(q):
    return float(q.matrix[0, 0])


def win_gap(f, target_coeff, lo=-2.0, hi=2.0):
    m = (f.x >= lo) & (f.x <= hi)
    return float(np.max(np.abs(f.values[m] - 0.5 * target_coeff * f.x[m] ** 2)))


# ---------------------------------------------------------------- quadratic backend

def test_quadratic_relative_entropy():
    assert abs(coeff(func_relative_entropy(quad(1.0), quad(np.e))) - 1.0) < 1e-12
    assert abs(coeff(func_relative_entropy(quad(2.0), quad(2.0)))) < 1e-14


def test_quadratic_tsallis():
    assert abs(coeff(func_tsallis(quad(1.0), quad(4.0), 0.5)) - 2.0) < 1e-12
    with pytest.raises(GridError):
        func_tsallis(quad(1.0), quad(4.0), 0.0)


def test_quadratic_tsallis_conj():
    # T_{1/2}(1/1 | 1/4) = (1 * (1/4)^{1/2} - 1) / (1/2) = -1
    assert abs(coeff(func_tsallis_conj(quad(1.0), quad(4.0), 0.5))
               + 1.0) < 1e-12
    with pytest.raises(GridError):
        func_tsallis_conj(quad(1.0), quad(4.0), 0.0)


def test_quadratic_parametric_entropy():
    got = coeff(func_parametric(quad(1.0), quad(np.e), 0.5))
    assert abs(got - np.sqrt(np.e)) < 1e-12
    at_zero = coeff(func_parametric(quad(1.0), quad(np.e), 0.0))
    assert abs(at_zero - 1.0) < 1e-12  # S_0 = S(f|g)
    at_one = coeff(func_parametric(quad(1.0), quad(np.e), 1.0))
    assert abs(at_one + np.e * np.log(1.0 / np.e)) < 1e-12  # -S(g|f)


# ---------------------------------------------------------------- grid backend

def test_grid_relative_entropy_matches_closed_form():
    f, g = quad_on_grid(1.0), quad_on_grid(4.0)
    s = func_relative_entropy(f, g, nodes=128)
    assert win_gap(s, np.log(4.0)) <= 1e-3


def test_grid_tsallis_matches_closed_form():
    f, g = quad_on_grid(1.0), quad_on_grid(4.0)
    t = func_tsallis(f, g, 0.5, nodes=64)
    assert win_gap(t, 2.0) <= 1e-3


def test_grid_tsallis_conj_matches_closed_form():
    f, g = quad_on_grid(1.0), quad_on_grid(4.0)
    s = np.linspace(-2.0, 2.0, 401)
    vals = tsallis_conj_at(f, g, 0.5, s)
    assert np.max(np.abs(vals - 0.5 * (-1.0) * s * s)) <= 1e-3
    as_functional = func_tsallis_conj(f, g, 0.5, dual=GridSpec(-2.0, 2.0, 401))
    assert np.max(np.abs(as_functional.values - vals)) <= 1e-12


def test_grid_parametric_matches_closed_form():
    f, g = quad_on_grid(1.0), quad_on_grid(np.e)
    sp = func_parametric(f, g, 0.5)
    assert win_gap(sp, np.sqrt(np.e)) <= 1e-3


def test_grid_parametric_boundaries():
    f, g = quad_on_grid(1.0), quad_on_grid(4.0)
    s0 = func_parametric(f, g, 0.0)
    assert win_gap(s0, np.log(4.0)) <= 1e-3
    s1 = func_parametric(f, g, 1.0)  # -S(g|f): coefficient -4 ln(1/4) = 4 ln 4
    assert win_gap(s1, 4.0 * np.log(4.0)) <= 4e-3


def test_grid_parametric_boundary_inf_raises():
    f = quad_on_grid(1.0, GridSpec(-4.0, 4.0, 201))
    vals = f.values.copy()
    vals[0] = INF
    g = GridFunctional(-4.0, 4.0, vals)
    # S(g|f) is +inf where g is, so S_1(f|g) = -S(g|f) has no representation
    with pytest.raises(GridError):
        func_parametric(f, g, 1.0)


def test_grid_entropy_keeps_domain():
    f = GridFunctional(-1.0, 1.0, [INF, 1.0, 0.0, 1.0, INF])
    g = GridFunctional(-1.0, 1.0, [0.5, 0.5, 0.5, 0.5, 0.5])
    s = func_relative_entropy(f, g, nodes=32)
    assert s.values[0] == INF and s.values[-1] == INF
    assert np.all(np.isfinite(s.values[1:4]))


# ---------------------------------------------------------------- checkers

def test_tsallis_conj_bounds_on_quadratic_grids_and_random():
    f, g = quad_on_grid(1.0), quad_on_grid(4.0)
    rec = check_tsallis_conj_bounds(f, g, 0.5)
    assert rec.passed, rec.margins
    with pytest.raises(GridError):
        check_tsallis_conj_bounds(f, g, 0.0)
    with pytest.raises(GridError):
        check_tsallis_conj_bounds(quad(1.0), quad(4.0), 0.5)
    rng = np.random.default_rng(41)
    spec = GridSpec(-4.0, 4.0, 201)
    for _ in range(6):
        a = random_convex_grid(rng, spec)
        b = random_convex_grid(rng, spec)
        p = float(rng.uniform(0.1, 0.9))
        assert check_tsallis_conj_bounds(a, b, p).passed, p


def test_entropy_sandwich():
    spec = GridSpec(-4.0, 4.0, 201)
    rng = np.random.default_rng(43)
    for _ in range(6):
        f = random_convex_grid(rng, spec)
        g = random_convex_grid(rng, spec)
        idx = rng.integers(50, 151, size=5)
        for rec in check_entropy_sandwich_batch(f, g, idx):
            assert rec.passed, rec.margins
    single = check_entropy_sandwich(quad_on_grid(1.0, spec), quad_on_grid(4.0, spec),
                             100)
    assert single.passed
    bad = GridFunctional(-4.0, 4.0, np.abs(np.sin(np.linspace(0, 9, 201))))
    with pytest.raises(GridError):
        check_entropy_sandwich(bad, quad_on_grid(1.0, spec), 100)


def test_entropy_sandwich_rejects_boundary_index():
    spec = GridSpec(-4.0, 4.0, 201)
    f = quad_on_grid(1.0, spec)
    vals = f.values.copy()
    vals[:3] = INF
    trunc = GridFunctional(-4.0, 4.0, vals)
    with pytest.warns(UserWarning):
        with pytest.raises(GridError):
            check_entropy_sandwich(trunc, f, 2)


def test_skew_symmetry_checker():
    f, g = quad_on_grid(1.0, GridSpec(-6.0, 6.0, 601)), \
        quad_on_grid(2.0, GridSpec(-6.0, 6.0, 601))
    rec = check_skew_symmetry(f, g, 0.3)
    assert rec.passed, rec.margins
    assert check_skew_symmetry(quad(1.0), quad(4.0), 0.3).passed
    with pytest.raises(GridError):
        check_skew_symmetry(f, g, 1.0)
    vals = f.values.copy()
    vals[0] = INF
    with pytest.raises(GridError):
        check_skew_symmetry(GridFunctional(-6.0, 6.0, vals), g, 0.3)


def test_parametric_sandwich_grid():
    spec = GridSpec(-4.0, 4.0, 201)
    rng = np.random.default_rng(47)
    for _ in range(4):
        f = random_convex_grid(rng, spec)
        g = random_convex_grid(rng, spec)
        idx = rng.integers(50, 151, size=4)
        for p in (0.25, 0.5, 0.75):
            for rec in check_parametric_sandwich_batch(f, g, p, idx):
                assert rec.passed, (p, rec.margins)
    one = check_parametric_sandwich_at(quad_on_grid(1.0, spec), quad_on_grid(4.0, spec),
                          0.5, 100)
    assert one.passed
    with pytest.raises(GridError):
        check_parametric_sandwich_at(quad_on_grid(1.0, spec), quad_on_grid(4.0, spec),
                        0.0, 100)


def test_gradient_sandwich_scalar_agrees_with_matrix_sandwich():
    rec = check_gradient_sandwich(quad(1.0), quad(4.0), 0.5)
    assert rec.passed, rec.margins
    ref = check_parametric_sandwich(PDMatrix([[1.0]]), PDMatrix([[4.0]]), 0.5)
    assert ref.passed
    # both routes must see the same scalar sandwich margins
    assert rec.margins["agrees_with_matrix_form"] >= 0.0


def test_gradient_sandwich_random_matrices():
    rng = np.random.default_rng(53)
    a = random_spd(4, seed=71)
    b = random_spd(4, seed=72)
    rec = check_gradient_sandwich(QuadraticFunctional(a.entries),
                            QuadraticFunctional(b.entries), 0.7, tol=1e-9)
    assert rec.passed, rec.margins
    for _ in range(10):
        dim = int(rng.integers(1, 6))
        x = random_spd(dim, seed=int(rng.integers(1 << 30)))
        y = random_spd(dim, seed=int(rng.integers(1 << 30)))
        p = float(rng.uniform(0.1, 0.9))
        assert check_gradient_sandwich(QuadraticFunctional(x.entries),
                                 QuadraticFunctional(y.entries), p).passed
    with pytest.raises(GridError):
        check_gradient_sandwich(quad(1.0), quad(4.0), 0.0)

"""Relative/Tsallis/parametric operator entropies and their checkers.

Frozen scalar expectations come from the closed forms a*ln(b/a),
(a^(1-p) b^p - a)/p and a*(b/a)^p*ln(b/a).
"""
import numpy as np
import pytest

from entropylab.matrices import PDMatrix, SymMatrix, MatrixError, random_spd
from entropylab.operator_means import geometric_mean
from entropylab.operator_entropy import (
    relative_entropy, relative_entropy_integral, tsallis_entropy,
    parametric_entropy, parametric_entropy_via_identity, check_identity_routes,
    check_congruence_property, check_entropy_bounds, check_parametric_sandwich,
    check_special_value_identity, parametric_entropy_bounds)


def scalar(v):
    return PDMatrix([[float(v)]])


def sval(m):
    return float(m.entries[0, 0])


def test_relative_entropy_basics():
    a = random_spd(4, seed=0)
    assert np.allclose(relative_entropy(a, a).entries, 0.0, atol=1e-12)
    assert abs(sval(relative_entropy(scalar(1), scalar(np.e))) - 1.0) < 1e-14
    d = relative_entropy(PDMatrix(np.diag([1.0, 2.0])),
                         PDMatrix(np.diag([np.e, 2.0 * np.e])))
    assert np.allclose(d.entries, np.diag([1.0, 2.0]), atol=1e-12)


def test_relative_entropy_integral_scalar():
    s = relative_entropy_integral(scalar(1), scalar(4), nodes=128)
    assert abs(sval(s) - np.log(4.0)) <= 1e-8


def test_relative_entropy_integral_matches_spectral():
    a = random_spd(4, seed=31)
    b = random_spd(4, seed=32)
    assert np.allclose(relative_entropy_integral(a, a).entries, 0.0,
                       atol=1e-12)
    exact = relative_entropy(a, b)
    approx = relative_entropy_integral(a, b, nodes=128)
    err = np.linalg.norm(approx.entries - exact.entries, "fro")
    assert err <= 1e-7 * (1.0 + exact.frobenius())


def test_relative_entropy_integral_node_convergence():
    a = PDMatrix(np.eye(2))
    b = PDMatrix(np.diag([100.0, 0.01]))
    exact = relative_entropy(a, b).entries
    errs = [np.linalg.norm(
        relative_entropy_integral(a, b, nodes).entries - exact, "fro")
        for nodes in (16, 32, 64, 128)]
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))


def test_tsallis_entropy_cases():
    assert abs(sval(tsallis_entropy(scalar(1), scalar(4), 0.5)) - 2.0) < 1e-12
    a, b = random_spd(3, seed=8), random_spd(3, seed=9)
    t1 = tsallis_entropy(a, b, 1.0)
    assert np.allclose(t1.entries, b.entries - a.entries, atol=1e-12)
    assert np.allclose(tsallis_entropy(a, a, 0.4).entries, 0.0, atol=1e-12)
    with pytest.raises(MatrixError):
        tsallis_entropy(a, b, 0.0)


def test_parametric_entropy_cases():
    got = sval(parametric_entropy(scalar(1), scalar(np.e), 0.5))
    assert abs(got - np.sqrt(np.e)) < 1e-12
    a = random_spd(4, seed=17)
    for p in (0.0, 0.3, 1.0):
        assert np.allclose(parametric_entropy(a, a, p).entries, 0.0, atol=1e-12)
    b = random_spd(4, seed=18)
    s0 = parametric_entropy(a, b, 0.0)
    assert np.allclose(s0.entries, relative_entropy(a, b).entries,
                       atol=1e-10)


def test_parametric_entropy_skew_symmetry():
    rng = np.random.default_rng(5)
    for _ in range(20):
        dim = int(rng.integers(1, 7))
        a = random_spd(dim, seed=int(rng.integers(1 << 30)))
        b = random_spd(dim, seed=int(rng.integers(1 << 30)))
        p = float(rng.uniform(0.05, 0.95))
        lhs = parametric_entropy(a, b, p).entries
        rhs = parametric_entropy(b, a, 1.0 - p).entries
        assert np.linalg.norm(lhs + rhs, "fro") <= 1e-9 * (
            1.0 + np.linalg.norm(lhs, "fro"))


def test_identity_routes_scalar_chain():
    # At (a,b,p) = (1,4,1/2): S_p = 4^(1/2) ln 4 = 2 ln 4, and both routes
    # -S(2|1)/0.5 and S(2|4)/0.5 equal it exactly.
    first, second = parametric_entropy_via_identity(scalar(1), scalar(4), 0.5)
    expect = 2.0 * np.log(4.0)
    assert abs(sval(first) - expect) < 1e-12
    assert abs(sval(second) - expect) < 1e-12
    assert abs(sval(parametric_entropy(scalar(1), scalar(4), 0.5))
               - expect) < 1e-12


def test_identity_routes_random():
    a, b = random_spd(5, seed=41), random_spd(5, seed=42)
    sp = parametric_entropy(a, b, 0.3)
    first, second = parametric_entropy_via_identity(a, b, 0.3)
    tol = 1e-9 * (1.0 + sp.frobenius())
    assert np.linalg.norm(first.entries - sp.entries, "fro") <= tol
    assert np.linalg.norm(second.entries - sp.entries, "fro") <= tol
    assert np.allclose(parametric_entropy_via_identity(a, a, 0.3)[0].entries, 0.0,
                       atol=1e-12)
    assert check_identity_routes(a, b, 0.3).passed
    with pytest.raises(MatrixError):
        parametric_entropy_via_identity(a, b, 0.0)


def test_congruence_property():
    a, b = random_spd(3, seed=51), random_spd(3, seed=52)
    rec = check_congruence_property(a, b, np.eye(3))
    assert rec.passed and rec.min_margin() >= 1e-8 - 1e-13
    # T = cI scales both sides by c^2
    lhs = relative_entropy(a, b).entries
    c = 1.7
    scaled = relative_entropy(PDMatrix(c * c * a.entries),
                              PDMatrix(c * c * b.entries)).entries
    assert np.allclose(scaled, c * c * lhs, atol=1e-10)
    rng = np.random.default_rng(4)
    from entropylab.matrices import random_invertible
    for _ in range(10):
        t = random_invertible(3, rng)
        assert check_congruence_property(a, b, t).passed


def test_entropy_bounds():
    a = random_spd(3, seed=61)
    assert check_entropy_bounds(a, a).passed
    s = sval(relative_entropy(scalar(1), scalar(np.e)))
    assert 1.0 - np.exp(-1.0) <= s <= np.e - 1.0
    rng = np.random.default_rng(8)
    for _ in range(30):
        dim = int(rng.integers(1, 9))
        x = random_spd(dim, seed=int(rng.integers(1 << 30)))
        y = random_spd(dim, seed=int(rng.integers(1 << 30)))
        assert check_entropy_bounds(x, y).passed


def test_parametric_sandwich_scalar():
    low, high = parametric_entropy_bounds(scalar(1), scalar(4), 0.5)
    mid = sval(parametric_entropy(scalar(1), scalar(4), 0.5))
    assert abs(mid - 2.0 * np.log(4.0)) < 1e-12
    assert sval(low) <= mid <= sval(high)
    assert abs(sval(low) - 2.0) < 1e-12  # G*T_{1/2}(1/4|1)*G + T_{1/2}(1|4) halved
    assert abs(sval(high) - 4.0) < 1e-12


def test_parametric_sandwich_random():
    rng = np.random.default_rng(13)
    assert check_parametric_sandwich(scalar(2), scalar(2), 0.5).passed
    for _ in range(25):
        dim = int(rng.integers(1, 7))
        a = random_spd(dim, seed=int(rng.integers(1 << 30)))
        b = random_spd(dim, seed=int(rng.integers(1 << 30)))
        p = float(rng.uniform(0.05, 0.95))
        rec = check_parametric_sandwich(a, b, p)
        assert rec.passed, (dim, p, rec.margins)


def test_entropy_at_identity():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = random_spd(int(rng.integers(1, 9)),
                       seed=int(rng.integers(1 << 30)))
        assert check_special_value_identity(a).passed


def test_dimension_mismatch_raises():
    with pytest.raises(MatrixError):
        relative_entropy(random_spd(2, seed=1), random_spd(3, seed=2))

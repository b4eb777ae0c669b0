"""Weighted functional arithmetic, harmonic and geometric means.

Two backends behind one interface: QuadraticFunctional pairs are handled
exactly through the operator means of their matrices; GridFunctional pairs
go through exact piecewise-linear conjugation, so the only numerical error
in the geometric mean is the quadrature over the weight parameter t.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import (GridFunctional, GridError, QuadraticFunctional,
                    PLConjugate, conjugate_pl, ext_combine, ext_sub, INF)
from .matrices import PDMatrix
from .operator_means import (arithmetic_mean, harmonic_mean, geometric_mean,
                             gauss_jacobi_unit, check_weight)
from .records import VerificationRecord, record_from_margins


def _pd(q: QuadraticFunctional) -> PDMatrix:
    if not q.is_positive_definite():
        raise GridError("this mean needs positive definite quadratics")
    return PDMatrix(q.matrix)


def _is_grid_pair(f, g) -> bool:
    if isinstance(f, GridFunctional) and isinstance(g, GridFunctional):
        if not f.same_grid(g):
            raise GridError("grid functionals must share the same grid")
        return True
    if isinstance(f, QuadraticFunctional) and isinstance(g, QuadraticFunctional):
        if f.dim != g.dim:
            raise GridError("quadratic functionals must share the dimension")
        return False
    raise GridError("f and g must be two grid or two quadratic functionals")


@dataclass
class _PLFunction:
    """Convex piecewise-linear function of the slope variable, with tails."""

    knots: np.ndarray
    values: np.ndarray
    left_slope: float
    right_slope: float


def combine_conjugates(cf: PLConjugate, cg: PLConjugate,
                       wf: float, wg: float) -> _PLFunction:
    """wf*f* + wg*g* as one piecewise-linear function (wf, wg > 0)."""
    knots = np.union1d(cf.knots, cg.knots)
    if knots.size == 0:
        knots = np.zeros(1)
    elif knots.size > 1:
        # Merge near-duplicate knots: a ~1e-13 gap between knots of the two
        # operands turns diff(values)/diff(knots) into cancellation noise.
        gap_tol = 1e-9 * (1.0 + np.abs(knots[1:]))
        keep = np.concatenate([[True], np.diff(knots) > gap_tol])
        knots = knots[keep]
    values = wf * cf(knots) + wg * cg(knots)
    left = wf * cf.slope_min + wg * cg.slope_min
    right = wf * cf.slope_max + wg * cg.slope_max
    return _PLFunction(knots, values, left, right)


def pl_conjugate_values(phi: _PLFunction, x: np.ndarray) -> np.ndarray:
    """phi*(x) for a convex PL phi; +inf outside [left_slope, right_slope]."""
    x = np.asarray(x, dtype=float)
    if phi.knots.size == 1:
        vals = x * phi.knots[0] - phi.values[0]
    else:
        seg = np.diff(phi.values) / np.diff(phi.knots)
        # phi is convex so seg is nondecreasing up to roundoff; searchsorted
        # needs it sorted exactly.
        seg = np.maximum.accumulate(seg)
        j = np.searchsorted(seg, x, side="left")
        vals = x * phi.knots[j] - phi.values[j]
    eps_l = 1e-12 * (1.0 + abs(phi.left_slope))
    eps_r = 1e-12 * (1.0 + abs(phi.right_slope))
    outside = (x < phi.left_slope - eps_l) | (x > phi.right_slope + eps_r)
    return np.where(outside, INF, vals)


def harmonic_on_grid(cf: PLConjugate, cg: PLConjugate, t: float,
                     x: np.ndarray) -> np.ndarray:
    """H_t(f, g) at the grid points, from precomputed conjugates."""
    return pl_conjugate_values(combine_conjugates(cf, cg, 1.0 - t, t), x)


def func_arithmetic(f, g, p: float):
    """(1-p) f + p g with extended-real arithmetic."""
    p = check_weight(p)
    if p == 0.0:
        return f
    if p == 1.0:
        return g
    if _is_grid_pair(f, g):
        return f.with_values(ext_combine(1.0 - p, f.values, p, g.values))
    return QuadraticFunctional(
        arithmetic_mean(_pd(f), _pd(g), p).entries)


def func_harmonic(f, g, p: float):
    """((1-p) f* + p g*)*; always convex."""
    p = check_weight(p)
    if p == 0.0:
        return f
    if p == 1.0:
        return g
    if _is_grid_pair(f, g):
        vals = harmonic_on_grid(conjugate_pl(f), conjugate_pl(g), p, f.x)
        return f.with_values(vals)
    return QuadraticFunctional(harmonic_mean(_pd(f), _pd(g), p).entries)


def func_geometric(f, g, p: float, nodes: int = 64):
    """Beta(p,1-p)-weighted combination of the harmonic means H_t(f,g).

    Quadratic backend takes the exact operator route f_(A#_pB); the grid
    backend sums Gauss-Jacobi nodes, reusing one conjugation of f and g.
    """
    p = check_weight(p)
    if p == 0.0:
        return f
    if p == 1.0:
        return g
    if not _is_grid_pair(f, g):
        return QuadraticFunctional(geometric_mean(_pd(f), _pd(g), p).entries)
    return f.with_values(geometric_values_on_grid(f, g, p, nodes))


def geometric_values_on_grid(f: GridFunctional, g: GridFunctional, p: float,
                             nodes: int = 64,
                             cf: PLConjugate | None = None,
                             cg: PLConjugate | None = None) -> np.ndarray:
    t, w = gauss_jacobi_unit(p, nodes)
    cf = cf if cf is not None else conjugate_pl(f)
    cg = cg if cg is not None else conjugate_pl(g)
    x = f.x
    acc = np.zeros(f.n)
    for tk, wk in zip(t, w):
        acc = acc + wk * harmonic_on_grid(cf, cg, tk, x)
    return acc


def _sup_gap(u: np.ndarray, v: np.ndarray) -> float:
    """Sup |u - v| over points where both are finite (0 if none)."""
    mask = np.isfinite(u) & np.isfinite(v)
    if not np.any(mask):
        return 0.0
    return float(np.max(np.abs(u[mask] - v[mask])))



def check_func_symmetry(f, g, p: float, tol: float = 1e-9,
                        nodes: int = 64) -> VerificationRecord:
    """M_p(f,g) = M_(1-p)(g,f) for the three functional means."""
    p = check_weight(p)
    grid = isinstance(f, GridFunctional)
    devs = {}
    for name, mean in (("arithmetic", func_arithmetic),
                       ("harmonic", func_harmonic)):
        lhs, rhs = mean(f, g, p), mean(g, f, 1.0 - p)
        devs[name] = _dev(lhs, rhs)
    lhs = func_geometric(f, g, p, nodes)
    rhs = func_geometric(g, f, 1.0 - p, nodes)
    devs["geometric"] = _dev(lhs, rhs)
    scale = 1.0 + max(
        np.max(np.abs(f.values[f.finite_mask])) if grid
        else np.linalg.norm(f.matrix),
        np.max(np.abs(g.values[g.finite_mask])) if grid
        else np.linalg.norm(g.matrix))
    margins = {k: tol * scale - v for k, v in devs.items()}
    return record_from_margins(
        "functional.mean_symmetry", {"p": p, "backend":
                                     "grid" if grid else "quadratic"}, margins)


def _dev(lhs, rhs) -> float:
    if isinstance(lhs, GridFunctional):
        return _sup_gap(lhs.values, rhs.values)
    return float(np.linalg.norm(lhs.matrix - rhs.matrix, "fro"))


def check_pointwise_order(f, g, p: float, tol: float = 1e-8,
                          nodes: int = 64) -> VerificationRecord:
    """H_p(f,g) <= G_p(f,g) <= A_p(f,g) pointwise.

    Infinite points satisfy the order vacuously by the +inf conventions, so
    margins are taken over points where both sides are finite.
    """
    p = check_weight(p)
    h = func_harmonic(f, g, p)
    ge = func_geometric(f, g, p, nodes)
    ar = func_arithmetic(f, g, p)
    if isinstance(f, GridFunctional):
        scale = 1.0 + float(np.max(np.abs(ar.values[np.isfinite(ar.values)])))
        lo = _min_signed(ext_sub(ge.values, h.values))
        hi = _min_signed(ext_sub(ar.values, ge.values))
        backend = "grid"
    else:
        # pointwise order of quadratics is the Loewner order of matrices
        from .matrices import SymMatrix, loewner_leq
        lo_chk = loewner_leq(SymMatrix(h.matrix), SymMatrix(ge.matrix), tol)
        hi_chk = loewner_leq(SymMatrix(ge.matrix), SymMatrix(ar.matrix), tol)
        scale = max(lo_chk.scale, hi_chk.scale)
        lo, hi = lo_chk.margin, hi_chk.margin
        backend = "quadratic"
    margins = {"harmonic_leq_geometric": lo + tol * scale,
               "geometric_leq_arithmetic": hi + tol * scale}
    return record_from_margins(
        "functional.agh_order", {"p": p, "backend": backend}, margins)


def _min_signed(diff: np.ndarray) -> float:
    """Smallest finite entry of a difference array (+inf entries pass)."""
    finite = diff[np.isfinite(diff)]
    return float(np.min(finite)) if finite.size else 0.0

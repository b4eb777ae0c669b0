"""Functional relative entropies: S(f|g), Tsallis T_p(f|g), its conjugate
form T_p*(f|g), the parametric entropy S_p(f|g), and the checkers for the
identity/inequality layer connecting them to the operator versions.
"""
from __future__ import annotations

import numpy as np

from .grids import (GridFunctional, GridError, QuadraticFunctional, GridSpec,
                    conjugate_pl, conjugate_at, quadratic_conjugate,
                    subdifferential, default_dual_grid, ext_sub, INF)
from .matrices import PDMatrix, SymMatrix, loewner_leq
from .operator_means import (check_weight, gauss_legendre_unit,
                             geometric_mean, inverse)
from .operator_entropy import (relative_entropy, tsallis_entropy,
                               parametric_entropy, parametric_entropy_bounds)
from .functional_means import (_is_grid_pair, _pd, harmonic_on_grid,
                               geometric_values_on_grid, func_geometric)
from .records import VerificationRecord, record_from_margins


def _entropy_values_on_grid(base: np.ndarray, cf, cg, x: np.ndarray,
                            nodes: int) -> np.ndarray:
    """int_0^1 (H_t - base)/t dt pointwise, Gauss-Legendre on (0,1).

    base must be the grid values of a convex functional whose conjugate is
    cf, so the integrand vanishes at t -> 0 and nodes never touch t = 0.
    """
    t, w = gauss_legendre_unit(nodes)
    acc = np.zeros(x.shape[0])
    for tk, wk in zip(t, w):
        h = harmonic_on_grid(cf, cg, tk, x)
        acc = acc + (wk / tk) * ext_sub(h, base)
    return np.where(np.isinf(base), INF, acc)


def func_relative_entropy(f, g, nodes: int = 128):
    """S(f|g) = int_0^1 (H_t(f,g) - f)/t dt.

    Grid backend assumes f convex (as in the source setting); quadratic
    backend returns f_S(A|B) exactly via the operator route.
    """
    if _is_grid_pair(f, g):
        vals = _entropy_values_on_grid(
            f.values, conjugate_pl(f), conjugate_pl(g), f.x, nodes)
        return f.with_values(vals)
    return QuadraticFunctional(relative_entropy(_pd(f), _pd(g)).entries)


def func_tsallis(f, g, p: float, nodes: int = 64):
    """T_p(f|g) = (G_p(f,g) - f)/p, p in (0, 1]."""
    p = check_weight(p)
    if p == 0.0:
        raise GridError(
            "T_p is undefined at p=0; use func_relative_entropy for the limit")
    if _is_grid_pair(f, g):
        gp = func_geometric(f, g, p, nodes)
        return f.with_values(ext_sub(gp.values, f.values) / p)
    return QuadraticFunctional(tsallis_entropy(_pd(f), _pd(g), p).entries)


def tsallis_conj_at(f: GridFunctional, g: GridFunctional, p: float, s,
                    gp: GridFunctional | None = None) -> np.ndarray:
    """T_p*(f|g)(s) = ((G_p(f,g))*(s) - f*(s)) / p at dual points s."""
    p = check_weight(p)
    if p == 0.0:
        raise GridError("T_p* is undefined at p=0")
    gp = gp if gp is not None else func_geometric(f, g, p)
    return (conjugate_at(gp, s) - conjugate_at(f, s)) / p


def func_tsallis_conj(f, g, p: float, nodes: int = 64,
                      dual: GridSpec | None = None):
    """T_p*(f|g) as a functional of the dual variable.

    Grid backend samples the exact conjugates on a dual grid (default sized
    by the attained slopes); quadratic backend is f_(T_p(A^-1|B^-1)).
    """
    p = check_weight(p)
    if p == 0.0:
        raise GridError("T_p* is undefined at p=0")
    if _is_grid_pair(f, g):
        gp = func_geometric(f, g, p, nodes)
        dual = dual if dual is not None else default_dual_grid(f, g)
        s = dual.points()
        return GridFunctional(dual.x_min, dual.x_max,
                              tsallis_conj_at(f, g, p, s, gp))
    a_inv, b_inv = inverse(_pd(f)), inverse(_pd(g))
    return QuadraticFunctional(tsallis_entropy(a_inv, b_inv, p).entries)


def func_parametric(f, g, p: float, nodes_means: int = 64,
                nodes_entropy: int = 128):
    """Parametric entropy S_p(f|g).

    S_p(f|g) = S(G_p(f,g)|g)/(2(1-p)) - S(G_p(f,g)|f)/(2p) for p in (0,1),
    with the stipulated boundary values S_0 = S(f|g) and S_1 = -S(g|f).
    Quadratic backend returns f_(S_p(A|B)) exactly.
    """
    p = check_weight(p)
    if not _is_grid_pair(f, g):
        return QuadraticFunctional(parametric_entropy(_pd(f), _pd(g), p).entries)
    if p == 0.0:
        return func_relative_entropy(f, g, nodes_entropy)
    if p == 1.0:
        rev = func_relative_entropy(g, f, nodes_entropy)
        if not rev.all_finite():
            raise GridError(
                "S_1(f|g) = -S(g|f) is not representable: S(g|f) hits +inf")
        return rev.with_values(-rev.values)
    cf, cg = conjugate_pl(f), conjugate_pl(g)
    gp_vals = geometric_values_on_grid(f, g, p, nodes_means, cf, cg)
    gp = f.with_values(gp_vals)
    cgp = conjugate_pl(gp)
    s_to_g = _entropy_values_on_grid(gp_vals, cgp, cg, f.x, nodes_entropy)
    s_to_f = _entropy_values_on_grid(gp_vals, cgp, cf, f.x, nodes_entropy)
    vals = ext_sub(s_to_g / (2.0 * (1.0 - p)), s_to_f / (2.0 * p))
    return f.with_values(vals)


def _sup_dev(u: np.ndarray, v: np.ndarray) -> float:
    mask = np.isfinite(u) & np.isfinite(v)
    if not np.any(mask):
        return 0.0
    return float(np.max(np.abs(u[mask] - v[mask])))


def check_tsallis_conj_bounds(f, g, p: float, x_star_index: int | None = None,
                 tol: float = 1e-9, nodes: int = 64,
                 dual: GridSpec | None = None) -> VerificationRecord:
    """Conjugate Tsallis identity and its two-sided bound on the dual grid.

    (i)  T*_(1-p)(g|f) = ((G_p(f,g))* - g*)/(1-p), as an identity;
    (ii) ((A_p(f,g))* - f*)/p <= T_p*(f|g) <= g* - f*.
    """
    p = check_weight(p)
    if not 0.0 < p < 1.0:
        raise GridError("check_tsallis_conj_bounds needs p in (0,1)")
    if not _is_grid_pair(f, g):
        raise GridError("check_tsallis_conj_bounds runs on the grid backend")
    dual = dual if dual is not None else default_dual_grid(f, g)
    s = dual.points()
    if x_star_index is not None:
        s = s[x_star_index:x_star_index + 1]
    gp = func_geometric(f, g, p, nodes)
    fstar = conjugate_at(f, s)
    gstar = conjugate_at(g, s)
    gpstar = conjugate_at(gp, s)
    # (i) computed through the independent route G_(1-p)(g,f)
    gp_swapped = func_geometric(g, f, 1.0 - p, nodes)
    lhs_identity = tsallis_conj_at(g, f, 1.0 - p, s, gp_swapped)
    rhs_identity = (gpstar - gstar) / (1.0 - p)
    scale = 1.0 + float(np.max(np.abs(rhs_identity)))
    # quadrature noise between the two G_p routes dominates the deviation
    quad_tol = tol * scale + _quadrature_estimate_dual(f, g, p, nodes, s)
    identity_margin = quad_tol - float(np.max(np.abs(
        lhs_identity - rhs_identity)))
    tstar = (gpstar - fstar) / p
    apstar = conjugate_at_arith(f, g, p, s)
    lower_margin = float(np.min(tstar - (apstar - fstar) / p)) + tol * scale
    upper_margin = float(np.min((gstar - fstar) - tstar)) + tol * scale
    return record_from_margins(
        "functional.tsallis_conj_bounds", {"p": p},
        {"identity": identity_margin, "lower": lower_margin,
         "upper": upper_margin})


def conjugate_at_arith(f: GridFunctional, g: GridFunctional, p: float,
                       s) -> np.ndarray:
    """((1-p)f + pg)*(s) exactly, via the hull of the combined values."""
    from .functional_means import func_arithmetic
    return conjugate_at(func_arithmetic(f, g, p), s)


def _quadrature_estimate_dual(f, g, p, nodes, s) -> float:
    """Estimated t-quadrature error of (G_p)* on the dual points."""
    coarse = func_geometric(f, g, p, max(nodes // 2, 2))
    fine = func_geometric(f, g, p, nodes)
    return float(np.max(np.abs(conjugate_at(fine, s)
                               - conjugate_at(coarse, s)))) + 1e-12


def check_entropy_sandwich_batch(f: GridFunctional, g: GridFunctional, indices,
                          nodes: int = 128, k_samples: int = 11,
                          slack_c: float = 10.0) -> list:
    """sup_(s in df(x)) (f* - g*)(s) <= S(f|g)(x) <= (g - f)(x).

    The sup is approximated by sampling the subdifferential interval, which
    only weakens the lower bound; slack covers the t-quadrature error.
    The shared S(f|g) integrals are computed once per call.
    """
    if not f.is_convex():
        raise GridError("check_entropy_sandwich needs a convex f")
    cf, cg = conjugate_pl(f), conjugate_pl(g)
    sfine = _entropy_values_on_grid(f.values, cf, cg, f.x, nodes)
    scoarse = _entropy_values_on_grid(f.values, cf, cg, f.x,
                                      max(nodes // 2, 2))
    diff = ext_sub(g.values, f.values)
    records = []
    for i in indices:
        sub = subdifferential(f, i)
        if sub.empty:
            raise GridError(f"grid index {i} is not interior to dom f")
        s = sub.samples(k_samples)
        gaps = cf(s) - cg(s)
        lower = float(np.max(gaps))
        sval = sfine[i]
        quad_est = (abs(sval - scoarse[i]) if np.isfinite(sval) else 0.0)
        slack = slack_c * (f.h + quad_est)
        margins = {}
        if np.isfinite(sval):
            margins["lower"] = float(sval) - lower + slack
            margins["upper"] = (float(diff[i]) - float(sval) + slack
                                if np.isfinite(diff[i]) else INF)
        records.append(record_from_margins(
            "functional.entropy_sandwich",
            {"i": int(i), "argmax_sample": float(s[np.argmax(gaps)])},
            margins))
    return records


def check_entropy_sandwich(f: GridFunctional, g: GridFunctional, i: int,
                    nodes: int = 128, k_samples: int = 11,
                    slack_c: float = 10.0) -> VerificationRecord:
    return check_entropy_sandwich_batch(f, g, [i], nodes, k_samples, slack_c)[0]


def check_skew_symmetry(f, g, p: float, nodes_means: int = 64,
                 nodes_entropy: int = 128,
                 tol: float = 1e-9) -> VerificationRecord:
    """Skew symmetry S_p(f|g) = -S_(1-p)(g|f) for everywhere-finite inputs."""
    p = check_weight(p)
    if not 0.0 < p < 1.0:
        raise GridError("check_skew_symmetry needs p in (0,1)")
    if _is_grid_pair(f, g):
        if not (f.all_finite() and g.all_finite()):
            raise GridError(
                "skew symmetry needs dom f = dom g = the whole grid")
        lhs = func_parametric(f, g, p, nodes_means, nodes_entropy).values
        rhs = func_parametric(g, f, 1.0 - p, nodes_means, nodes_entropy).values
        dev = float(np.max(np.abs(lhs + rhs)))
        scale = 1.0 + float(np.max(np.abs(lhs)))
        quad = 2.0 * _entropy_quad_estimate(f, g, p, nodes_means,
                                            nodes_entropy)
        margin = tol * scale + quad - dev
    else:
        lhs = parametric_entropy(_pd(f), _pd(g), p)
        rhs = parametric_entropy(_pd(g), _pd(f), 1.0 - p)
        dev = float(np.linalg.norm(lhs.entries + rhs.entries, "fro"))
        scale = 1.0 + lhs.frobenius()
        margin = tol * scale - dev
    return record_from_margins(
        "functional.skew_symmetry", {"p": p}, {"deviation": margin})


def _entropy_quad_estimate(f, g, p, nodes_means, nodes_entropy) -> float:
    """Estimated quadrature error of S_p on a grid pair."""
    fine = func_parametric(f, g, p, nodes_means, nodes_entropy).values
    coarse = func_parametric(f, g, p, max(nodes_means // 2, 2),
                         max(nodes_entropy // 2, 2)).values
    return _sup_dev(fine, coarse) + 1e-12


def check_parametric_sandwich_batch(f: GridFunctional, g: GridFunctional, p: float,
                          indices, k_samples: int = 11,
                          nodes_means: int = 64, nodes_entropy: int = 128,
                          slack_c: float = 10.0) -> list:
    """Two-sided Tsallis sandwich for S_p(f|g) at interior points.

    lower = (sup_(s in dG_p(x)) T*_(1-p)(g|f)(s) + T_p(f|g)(x)) / 2
    upper = (-T_(1-p)(g|f)(x) - sup_(s in dG_p(x)) T_p*(f|g)(s)) / 2
    with sups sampled on the subdifferential interval of G_p at x; sampling
    weakens both bounds, never tightens them. G_p, S_p and the quadrature
    error estimate are shared across the points.
    """
    p = check_weight(p)
    if not 0.0 < p < 1.0:
        raise GridError("check_parametric_sandwich_at needs p in (0,1)")
    gp = func_geometric(f, g, p, nodes_means)
    sp = func_parametric(f, g, p, nodes_means, nodes_entropy).values
    quad = _entropy_quad_estimate(f, g, p, nodes_means, nodes_entropy)
    slack = slack_c * (f.h + quad)
    cgp, cf, cg = conjugate_pl(gp), conjugate_pl(f), conjugate_pl(g)
    t_lows = ext_sub(gp.values, f.values) / p
    t_highs = ext_sub(gp.values, g.values) / (1.0 - p)
    records = []
    for i in indices:
        sub = subdifferential(gp, i)
        if sub.empty:
            raise GridError(
                f"grid index {i} is not interior to dom G_p(f,g)")
        s = sub.samples(k_samples)
        gpstar = cgp(s)
        sup_dual_low = float(np.max((gpstar - cg(s)) / (1.0 - p)))
        sup_dual_high = float(np.max((gpstar - cf(s)) / p))
        lower = 0.5 * (sup_dual_low + float(t_lows[i]))
        upper = 0.5 * (-float(t_highs[i]) - sup_dual_high)
        margins = {
            "lower": float(sp[i]) - lower + slack,
            "upper": upper - float(sp[i]) + slack,
        }
        records.append(record_from_margins(
            "functional.parametric_sandwich",
            {"p": p, "i": int(i), "sup_samples": k_samples}, margins))
    return records


def check_parametric_sandwich_at(f: GridFunctional, g: GridFunctional, p: float, i: int,
                    k_samples: int = 11, nodes_means: int = 64,
                    nodes_entropy: int = 128,
                    slack_c: float = 10.0) -> VerificationRecord:
    return check_parametric_sandwich_batch(f, g, p, [i], k_samples, nodes_means,
                                 nodes_entropy, slack_c)[0]


def check_gradient_sandwich(fa: QuadraticFunctional, fb: QuadraticFunctional,
                      p: float, tol: float = 1e-9) -> VerificationRecord:
    """Gradient specialization on quadratics agrees with the matrix sandwich.

    The bounds are rebuilt through the conjugate-calculus route
    (quadratic conjugates and the congruence f_M(Gx) = f_(GMG)(x)) and their
    Loewner margins must match parametric_entropy_bounds to 1e-9.
    """
    p = check_weight(p)
    if not 0.0 < p < 1.0:
        raise GridError("check_gradient_sandwich needs p in (0,1)")
    a, b = _pd(fa), _pd(fb)
    g = geometric_mean(a, b, p).entries
    # T*_(1-p)(f_B|f_A) via conjugates: ((B#_(1-p)A)^-1 - B^-1)/(1-p)
    g_swapped = geometric_mean(b, a, 1.0 - p)
    m_low = (quadratic_conjugate(QuadraticFunctional(g_swapped.entries)).matrix
             - quadratic_conjugate(fb).matrix) / (1.0 - p)
    t_low = (geometric_mean(a, b, p).entries - a.entries) / p
    lower = SymMatrix(0.5 * (g @ m_low @ g + t_low))
    m_high = (quadratic_conjugate(QuadraticFunctional(g)).matrix
              - quadratic_conjugate(fa).matrix) / p
    t_high = (g_swapped.entries - b.entries) / (1.0 - p)
    upper = SymMatrix(0.5 * (-t_high - g @ m_high @ g))
    sp = parametric_entropy(a, b, p)
    low_chk = loewner_leq(lower, sp, tol)
    high_chk = loewner_leq(sp, upper, tol)
    ref_lower, ref_upper = parametric_entropy_bounds(a, b, p)
    ref_low = loewner_leq(ref_lower, sp, tol)
    ref_high = loewner_leq(sp, ref_upper, tol)
    agree_scale = tol * max(ref_low.scale, ref_high.scale)
    margins = {
        "lower": low_chk.margin + tol * low_chk.scale,
        "upper": high_chk.margin + tol * high_chk.scale,
        "agrees_with_matrix_form": agree_scale - max(
            abs(low_chk.margin - ref_low.margin),
            abs(high_chk.margin - ref_high.margin)),
    }
    return record_from_margins(
        "functional.gradient_sandwich", {"dim": fa.dim, "p": p}, margins)

"""Relative operator entropy S(A|B), Tsallis T_p(A|B), the parametric
entropy S_p(A|B), the identity routes through S(A#_pB|.) and the operator
inequality checkers.
"""
from __future__ import annotations

import numpy as np

from .matrices import (PDMatrix, SymMatrix, matrix_fn, congruence,
                       loewner_leq, MatrixError)
from .operator_means import (check_weight, inverse, geometric_mean,
                             gauss_legendre_unit)
from .records import VerificationRecord, record_from_margins


def _sandwich(a: PDMatrix, b: PDMatrix, phi) -> SymMatrix:
    """A^(1/2) phi(A^(-1/2) B A^(-1/2)) A^(1/2)."""
    if a.dim != b.dim:
        raise MatrixError(f"dimension mismatch: {a.dim} vs {b.dim}")
    r = matrix_fn(a, np.sqrt).entries
    r_inv = matrix_fn(a, lambda w: 1.0 / np.sqrt(w)).entries
    inner = PDMatrix(r_inv @ b.entries @ r_inv)
    return SymMatrix(r @ matrix_fn(inner, phi).entries @ r)


def relative_entropy(a: PDMatrix, b: PDMatrix) -> SymMatrix:
    """S(A|B) = A^(1/2) log(A^(-1/2) B A^(-1/2)) A^(1/2)."""
    return _sandwich(a, b, np.log)


def relative_entropy_integral(a: PDMatrix, b: PDMatrix,
                              nodes: int = 128) -> SymMatrix:
    """Integral route: S(A|B) = int_0^1 (A !_t B - A) / t dt.

    Gauss-Legendre nodes are interior to (0,1), so the removable t=0
    singularity (limit A - A B^-1 A) is never evaluated.
    """
    if a.dim != b.dim:
        raise MatrixError(f"dimension mismatch: {a.dim} vs {b.dim}")
    t, w = gauss_legendre_unit(nodes)
    a_inv = inverse(a).entries
    b_inv = inverse(b).entries
    acc = np.zeros_like(a.entries)
    for tk, wk in zip(t, w):
        h = np.linalg.inv((1.0 - tk) * a_inv + tk * b_inv)
        acc += (wk / tk) * (h - a.entries)
    return SymMatrix(acc)


def tsallis_entropy(a: PDMatrix, b: PDMatrix, p: float) -> SymMatrix:
    """T_p(A|B) = (A#_pB - A)/p for p in (0, 1]."""
    p = check_weight(p)
    if p == 0.0:
        raise MatrixError(
            "T_p is undefined at p=0; use relative_entropy for the limit")
    return SymMatrix((geometric_mean(a, b, p).entries - a.entries) / p)


def parametric_entropy(a: PDMatrix, b: PDMatrix, p: float) -> SymMatrix:
    """S_p(A|B) = A^(1/2) C^p log(C) A^(1/2) with C = A^(-1/2) B A^(-1/2)."""
    p = check_weight(p)
    return _sandwich(a, b, lambda w: w ** p * np.log(w))


def parametric_entropy_via_identity(a: PDMatrix, b: PDMatrix, p: float):
    """Both identity routes: (-S(A#_pB|A)/p, S(A#_pB|B)/(1-p))."""
    p = check_weight(p)
    if not 0.0 < p < 1.0:
        raise MatrixError("identity routes require p in (0,1)")
    g = geometric_mean(a, b, p)
    first = SymMatrix(-relative_entropy(g, a).entries / p)
    second = SymMatrix(relative_entropy(g, b).entries / (1.0 - p))
    return first, second


def check_identity_routes(a: PDMatrix, b: PDMatrix, p: float,
                          tol: float = 1e-9) -> VerificationRecord:
    """Both routes of parametric_entropy_via_identity must match parametric_entropy."""
    sp = parametric_entropy(a, b, p)
    first, second = parametric_entropy_via_identity(a, b, p)
    scale = 1.0 + sp.frobenius()
    margins = {
        "via_base": tol * scale - np.linalg.norm(
            first.entries - sp.entries, "fro"),
        "via_target": tol * scale - np.linalg.norm(
            second.entries - sp.entries, "fro"),
    }
    return record_from_margins(
        "operator.identity_routes", {"dim": a.dim, "p": p}, margins)


def check_congruence_property(a: PDMatrix, b: PDMatrix, t: np.ndarray,
                              tol: float = 1e-8) -> VerificationRecord:
    """T^T S(A|B) T = S(T^T A T | T^T B T)."""
    lhs = congruence(t, relative_entropy(a, b))
    rhs = relative_entropy(PDMatrix(congruence(t, a).entries),
                           PDMatrix(congruence(t, b).entries))
    scale = 1.0 + lhs.frobenius()
    dev = np.linalg.norm(lhs.entries - rhs.entries, "fro")
    return record_from_margins(
        "operator.congruence", {"dim": a.dim},
        {"congruence": tol * scale - dev})


def check_entropy_bounds(a: PDMatrix, b: PDMatrix,
                         tol: float = 1e-8) -> VerificationRecord:
    """A - A B^-1 A <= S(A|B) <= B - A."""
    s = relative_entropy(a, b)
    lower = SymMatrix(a.entries
                      - a.entries @ inverse(b).entries @ a.entries)
    upper = SymMatrix(b.entries - a.entries)
    low = loewner_leq(lower, s, tol)
    high = loewner_leq(s, upper, tol)
    margins = {
        "lower": low.margin + tol * low.scale,
        "upper": high.margin + tol * high.scale,
    }
    witness = None
    if not (low.passed and high.passed):
        witness = {"A": a.entries.tolist(), "B": b.entries.tolist()}
    return record_from_margins(
        "operator.entropy_bounds", {"dim": a.dim}, margins, witness)


def parametric_entropy_bounds(a: PDMatrix, b: PDMatrix, p: float):
    """The Tsallis sandwich around S_p(A|B); returns (lower, upper).

    lower = (G T_(1-p)(B^-1|A^-1) G + T_p(A|B)) / 2
    upper = (-T_(1-p)(B|A) - G T_p(A^-1|B^-1) G) / 2, with G = A#_pB.
    """
    p = check_weight(p)
    if not 0.0 < p < 1.0:
        raise MatrixError("the sandwich requires p in (0,1)")
    g = geometric_mean(a, b, p).entries
    a_inv, b_inv = inverse(a), inverse(b)
    t_dual_low = tsallis_entropy(b_inv, a_inv, 1.0 - p).entries
    t_low = tsallis_entropy(a, b, p).entries
    lower = SymMatrix(0.5 * (g @ t_dual_low @ g + t_low))
    t_high = tsallis_entropy(b, a, 1.0 - p).entries
    t_dual_high = tsallis_entropy(a_inv, b_inv, p).entries
    upper = SymMatrix(0.5 * (-t_high - g @ t_dual_high @ g))
    return lower, upper


def check_parametric_sandwich(a: PDMatrix, b: PDMatrix, p: float,
                             tol: float = 1e-8) -> VerificationRecord:
    """S_p(A|B) lies between the Tsallis sandwich bounds."""
    sp = parametric_entropy(a, b, p)
    lower, upper = parametric_entropy_bounds(a, b, p)
    low = loewner_leq(lower, sp, tol)
    high = loewner_leq(sp, upper, tol)
    margins = {
        "lower": low.margin + tol * low.scale,
        "upper": high.margin + tol * high.scale,
    }
    witness = None
    if not (low.passed and high.passed):
        witness = {"A": a.entries.tolist(), "B": b.entries.tolist(), "p": p}
    return record_from_margins(
        "operator.parametric_sandwich", {"dim": a.dim, "p": p},
        margins, witness)


def check_special_value_identity(a: PDMatrix,
                                 tol: float = 1e-9) -> VerificationRecord:
    """S(A|I) = -A log A."""
    eye = PDMatrix(np.eye(a.dim))
    lhs = relative_entropy(a, eye)
    alog = a.entries @ matrix_fn(a, np.log).entries
    scale = 1.0 + lhs.frobenius()
    dev = np.linalg.norm(lhs.entries + 0.5 * (alog + alog.T), "fro")
    return record_from_margins(
        "operator.entropy_at_identity", {"dim": a.dim},
        {"deviation": tol * scale - dev})

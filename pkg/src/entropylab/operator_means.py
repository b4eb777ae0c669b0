"""Weighted arithmetic, harmonic and geometric operator means.

Includes the Gauss-Jacobi quadrature route to the geometric mean (the
harmonic-mean integral representation with the Beta(p, 1-p) density) and the
symmetry / arithmetic-geometric-harmonic order checkers.
"""
from __future__ import annotations

import warnings

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .matrices import PDMatrix, SymMatrix, matrix_fn, loewner_leq, MatrixError
from .records import VerificationRecord, record_from_margins


def check_weight(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise MatrixError(f"weight p must lie in [0, 1], got {p}")
    return p


def _same_dim(a: PDMatrix, b: PDMatrix) -> None:
    if a.dim != b.dim:
        raise MatrixError(f"dimension mismatch: {a.dim} vs {b.dim}")


def inverse(a: PDMatrix) -> PDMatrix:
    return PDMatrix(matrix_fn(a, lambda w: 1.0 / w).entries)


def arithmetic_mean(a: PDMatrix, b: PDMatrix, p: float) -> PDMatrix:
    """(1-p) A + p B."""
    p = check_weight(p)
    _same_dim(a, b)
    if p == 0.0:
        return a
    if p == 1.0:
        return b
    return PDMatrix((1.0 - p) * a.entries + p * b.entries)


def harmonic_mean(a: PDMatrix, b: PDMatrix, p: float) -> PDMatrix:
    """((1-p) A^-1 + p B^-1)^-1."""
    p = check_weight(p)
    _same_dim(a, b)
    if p == 0.0:
        return a
    if p == 1.0:
        return b
    mixed = (1.0 - p) * inverse(a).entries + p * inverse(b).entries
    return inverse(PDMatrix(mixed))


def geometric_mean(a: PDMatrix, b: PDMatrix, p: float) -> PDMatrix:
    """A^(1/2) (A^(-1/2) B A^(-1/2))^p A^(1/2)."""
    p = check_weight(p)
    _same_dim(a, b)
    if p == 0.0:
        return a
    if p == 1.0:
        return b
    r = matrix_fn(a, np.sqrt).entries
    r_inv = matrix_fn(a, lambda w: 1.0 / np.sqrt(w)).entries
    inner = PDMatrix(r_inv @ b.entries @ r_inv)
    mid = matrix_fn(inner, lambda w: w ** p).entries
    return PDMatrix(r @ mid @ r)


def gauss_jacobi_unit(p: float, nodes: int):
    """Nodes/weights for the Beta(p, 1-p) density on (0, 1).

    The weights are normalized by sin(p*pi)/pi, so they sum to 1: the weight
    t^(p-1) (1-t)^(-p) integrates to B(p, 1-p) = pi/sin(p*pi).
    """
    if not 0.0 < p < 1.0:
        raise MatrixError(f"quadrature weight requires p in (0,1), got {p}")
    if nodes < 2:
        raise MatrixError("nodes must be >= 2")
    with warnings.catch_warnings():
        # scipy's recurrence emits a spurious 0/0 warning for these params
        warnings.simplefilter("ignore", RuntimeWarning)
        x, w = roots_jacobi(nodes, -p, p - 1.0)
    t = 0.5 * (x + 1.0)
    return t, w * (np.sin(np.pi * p) / np.pi)


def gauss_legendre_unit(nodes: int):
    """Gauss-Legendre nodes/weights mapped to (0, 1)."""
    if nodes < 2:
        raise MatrixError("nodes must be >= 2")
    x, w = roots_legendre(nodes)
    return 0.5 * (x + 1.0), 0.5 * w


def geometric_mean_integral(a: PDMatrix, b: PDMatrix, p: float,
                            nodes: int = 64) -> PDMatrix:
    """Quadrature oracle for the geometric mean.

    Integrates the weighted harmonic means against the Beta(p, 1-p) density:
    sin(p pi)/pi * int_0^1 t^(p-1) (1-t)^(-p) (A !_t B) dt.
    """
    p = check_weight(p)
    if p in (0.0, 1.0):
        raise MatrixError("integral form requires p in (0,1)")
    _same_dim(a, b)
    t, w = gauss_jacobi_unit(p, nodes)
    a_inv = inverse(a).entries
    b_inv = inverse(b).entries
    acc = np.zeros_like(a.entries)
    for tk, wk in zip(t, w):
        acc += wk * np.linalg.inv((1.0 - tk) * a_inv + tk * b_inv)
    return PDMatrix(acc)


def check_mean_symmetry(a: PDMatrix, b: PDMatrix, p: float,
                        tol: float = 1e-9) -> VerificationRecord:
    """M_p(A,B) = M_(1-p)(B,A) for the arithmetic/harmonic/geometric means."""
    p = check_weight(p)
    devs = {}
    for name, mean in (("arithmetic", arithmetic_mean),
                       ("harmonic", harmonic_mean),
                       ("geometric", geometric_mean)):
        lhs = mean(a, b, p).entries
        rhs = mean(b, a, 1.0 - p).entries
        scale = 1.0 + np.linalg.norm(lhs, "fro")
        devs[name] = tol * scale - np.linalg.norm(lhs - rhs, "fro")
    return record_from_margins(
        "operator.mean_symmetry", {"dim": a.dim, "p": p}, devs)


def check_agh(a: PDMatrix, b: PDMatrix, p: float,
              tol: float = 1e-8) -> VerificationRecord:
    """Harmonic <= geometric <= arithmetic in the Loewner order."""
    p = check_weight(p)
    h = harmonic_mean(a, b, p)
    g = geometric_mean(a, b, p)
    m = arithmetic_mean(a, b, p)
    low = loewner_leq(h, g, tol)
    high = loewner_leq(g, m, tol)
    margins = {
        "harmonic_leq_geometric": low.margin + tol * low.scale,
        "geometric_leq_arithmetic": high.margin + tol * high.scale,
    }
    witness = None
    if not (low.passed and high.passed):
        witness = {"A": a.entries.tolist(), "B": b.entries.tolist()}
    return record_from_margins(
        "operator.agh_order", {"dim": a.dim, "p": p}, margins, witness)

"""Dense real symmetric linear algebra: spectral decomposition, matrix
functions, congruence, Loewner-order testing and random SPD generation.

Everything here works on small dense matrices (dims well below ~100) and is
pure: values are immutable after construction and safe to share between
threads.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SYMMETRY_ATOL = 1e-12
# lambda_min <= PD_REJECT_RATIO * lambda_max is rejected as "not invertible"
PD_REJECT_RATIO = 1e-12


class MatrixError(ValueError):
    """Shape / symmetry / domain problem with a matrix argument."""


class NotPositiveDefiniteError(MatrixError):
    """Raised when a PDMatrix is constructed from a non-PD input."""


class EigenSolverError(RuntimeError):
    """Eigensolver failed to converge; carries the residual diagnostic."""


def _square(entries) -> np.ndarray:
    m = np.array(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise MatrixError("matrix must be at least 1x1")
    if not np.all(np.isfinite(m)):
        raise MatrixError("matrix entries must be finite")
    return m


class SymMatrix:
    """Real symmetric matrix. Construction symmetrizes via (M + M^T)/2."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        m = _square(entries)
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        self.entries = m

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries, "fro"))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class PDMatrix(SymMatrix):
    """Symmetric positive definite matrix (the operators A, B)."""

    __slots__ = ()

    def __init__(self, entries):
        super().__init__(entries)
        w = np.linalg.eigvalsh(self.entries)
        if w[0] <= PD_REJECT_RATIO * max(w[-1], 0.0):
            raise NotPositiveDefiniteError(
                f"matrix is not positive definite: lambda_min={w[0]:.3e}, "
                f"lambda_max={w[-1]:.3e}"
            )


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues ascending, eigenvectors as orthogonal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        q, lam = self.eigenvectors, self.eigenvalues
        return (q * lam) @ q.T


def sym_eig(m: SymMatrix) -> SpectralDecomposition:
    """Spectral decomposition of a symmetric matrix, eigenvalues ascending."""
    a = m.entries if isinstance(m, SymMatrix) else SymMatrix(m).entries
    try:
        w, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh on small
        raise EigenSolverError(f"eigensolver did not converge: {exc}") from exc
    w.setflags(write=False)
    q.setflags(write=False)
    dec = SpectralDecomposition(w, q)
    resid = np.linalg.norm(dec.reconstruct() - a, "fro")
    if resid > 1e-10 * (1.0 + np.linalg.norm(a, "fro")):  # pragma: no cover
        raise EigenSolverError(f"spectral residual too large: {resid:.3e}")
    return dec


def matrix_fn(m: SymMatrix, phi) -> SymMatrix:
    """Spectral calculus phi(M) = Q phi(Lambda) Q^T.

    phi must be finite on the spectrum of M; otherwise a MatrixError is
    raised (e.g. log of a non-positive eigenvalue).
    """
    dec = sym_eig(m)
    with np.errstate(all="ignore"):
        vals = np.asarray(phi(dec.eigenvalues), dtype=float)
    if vals.shape != dec.eigenvalues.shape or not np.all(np.isfinite(vals)):
        raise MatrixError(
            "scalar function is undefined on part of the spectrum "
            f"(eigenvalues {dec.eigenvalues})"
        )
    q = dec.eigenvectors
    return SymMatrix((q * vals) @ q.T)


def congruence(t: np.ndarray, m: SymMatrix) -> SymMatrix:
    """Congruence transform T^T M T (keeps symmetry, keeps positivity)."""
    t = np.asarray(t, dtype=float)
    if t.shape != m.entries.shape:
        raise MatrixError(f"shape mismatch: T {t.shape} vs M {m.entries.shape}")
    return SymMatrix(t.T @ m.entries @ t)


@dataclass(frozen=True)
class LoewnerCheck:
    """Result of testing X <= Y in the Loewner order."""

    margin: float  # min eigenvalue of Y - X
    scale: float  # 1 + ||X||_F + ||Y||_F
    tol: float
    passed: bool


def loewner_leq(x: SymMatrix, y: SymMatrix, tol: float = 1e-8) -> LoewnerCheck:
    """Test X <= Y, i.e. Y - X positive semidefinite up to relative slack."""
    if x.dim != y.dim:
        raise MatrixError("dimension mismatch in Loewner comparison")
    margin = float(np.linalg.eigvalsh(y.entries - x.entries)[0])
    scale = 1.0 + x.frobenius() + y.frobenius()
    return LoewnerCheck(margin, scale, tol, margin >= -tol * scale)


def random_spd_from_rng(dim: int, rng: np.random.Generator,
                        cond_cap: float = 100.0) -> PDMatrix:
    """Random SPD matrix with condition number <= cond_cap.

    Eigenvalues are log-uniform in [1/sqrt(cond_cap), sqrt(cond_cap)] and the
    eigenbasis is Haar-ish from a QR of a Gaussian matrix.
    """
    if dim < 1:
        raise MatrixError("dim must be >= 1")
    if cond_cap < 1.0:
        raise MatrixError("cond_cap must be >= 1")
    half = 0.5 * np.log(cond_cap)
    lam = np.exp(rng.uniform(-half, half, size=dim))
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    q = q * np.sign(np.diag(r))
    return PDMatrix((q * lam) @ q.T)


def random_spd(dim: int, seed: int, cond_cap: float = 100.0) -> PDMatrix:
    """Deterministic-in-seed random SPD matrix (see random_spd_from_rng)."""
    return random_spd_from_rng(dim, np.random.default_rng(seed), cond_cap)


def random_invertible(dim: int, rng: np.random.Generator,
                      smin_floor: float = 1e-3) -> np.ndarray:
    """Random Gaussian matrix, resampled until sigma_min >= smin_floor."""
    while True:
        t = rng.standard_normal((dim, dim))
        if np.linalg.svd(t, compute_uv=False)[-1] >= smin_floor:
            return t


def save_matrix(path, m: SymMatrix) -> None:
    """Write a matrix as JSON {"dim": n, "rows": [...]} or CSV by suffix."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            for row in m.entries:
                writer.writerow([repr(float(v)) for v in row])
    else:
        payload = {"dim": m.dim, "rows": [[float(v) for v in row]
                                          for row in m.entries]}
        path.write_text(json.dumps(payload, indent=2) + "\n")


def load_matrix(path, positive: bool = True) -> SymMatrix:
    """Read a matrix file (JSON or CSV); symmetrizes and validates."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with path.open(newline="") as fh:
            rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    else:
        payload = json.loads(path.read_text())
        rows = payload["rows"]
        if "dim" in payload and len(rows) != payload["dim"]:
            raise MatrixError(f"{path}: dim field does not match row count")
    return PDMatrix(rows) if positive else SymMatrix(rows)

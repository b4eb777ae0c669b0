"""Extended-real convex analysis on 1-D grids.

A GridFunctional stores extended-real values on a uniform grid and stands
for the sampled functional plus the indicator of [x_min, x_max]; +inf marks
points outside the effective domain. Conjugation is done exactly through the
lower convex hull of the graph: the conjugate of a grid functional is a
piecewise-linear function of the slope variable, and every downstream
construction evaluates that representation without re-discretizing.

Extended-real arithmetic follows the conventions 0*(+inf) = +inf and
a - (+inf) = (+inf) - (+inf) = +inf; -inf never occurs.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .records import VerificationRecord, record_from_margins

INF = float("inf")


class GridError(ValueError):
    """Bad grid functional construction or argument."""


@dataclass(frozen=True)
class ExtendedReal:
    """A real number or +inf, with the extended-arithmetic conventions."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if np.isnan(v) or v == -INF:
            raise GridError(f"extended reals are finite or +inf, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def finite(self) -> bool:
        return self.value != INF

    def __add__(self, other: "ExtendedReal") -> "ExtendedReal":
        return ExtendedReal(self.value + other.value)

    def __sub__(self, other: "ExtendedReal") -> "ExtendedReal":
        # subtraction with an infinite subtrahend yields +inf by convention
        if not other.finite or not self.finite:
            return ExtendedReal(INF)
        return ExtendedReal(self.value - other.value)

    def scale(self, c: float) -> "ExtendedReal":
        """c * x for c >= 0, with 0 * (+inf) = +inf."""
        if c < 0.0:
            raise GridError("scale factor must be nonnegative")
        if not self.finite:
            return ExtendedReal(INF)
        return ExtendedReal(c * self.value)

    def __le__(self, other):
        return self.value <= other.value

    def __float__(self):
        return self.value


def ext_sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise a - b where any infinite operand yields +inf."""
    with np.errstate(invalid="ignore"):
        diff = a - b
    return np.where(np.isinf(b), INF, diff)


def ext_combine(wa: float, a: np.ndarray, wb: float, b: np.ndarray):
    """wa*a + wb*b with 0*(+inf) = +inf (wa, wb >= 0)."""
    with np.errstate(invalid="ignore"):
        out = wa * a + wb * b
    inf_mask = np.isinf(a) | np.isinf(b)
    return np.where(inf_mask, INF, out)


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise GridError("grid needs n >= 2")
        if not self.x_max > self.x_min:
            raise GridError("grid needs x_max > x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)


class GridFunctional:
    """Extended-real values on a uniform grid; at least one finite value."""

    __slots__ = ("x_min", "x_max", "n", "values")

    def __init__(self, x_min: float, x_max: float, values):
        vals = np.array(values, dtype=float)
        if vals.ndim != 1 or vals.shape[0] < 2:
            raise GridError("values must be a 1-D array with n >= 2")
        if np.any(np.isnan(vals)) or np.any(vals == -INF):
            raise GridError("values must be finite reals or +inf")
        if not np.any(np.isfinite(vals)):
            raise GridError("functional must be proper (one finite value)")
        if not x_max > x_min:
            raise GridError("x_max must exceed x_min")
        vals.setflags(write=False)
        self.x_min = float(x_min)
        self.x_max = float(x_max)
        self.n = vals.shape[0]
        self.values = vals

    @property
    def spec(self) -> GridSpec:
        return GridSpec(self.x_min, self.x_max, self.n)

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.values)

    def dom_indices(self) -> np.ndarray:
        return np.flatnonzero(self.finite_mask)

    def all_finite(self) -> bool:
        return bool(np.all(self.finite_mask))

    def with_values(self, values) -> "GridFunctional":
        return GridFunctional(self.x_min, self.x_max, values)

    def same_grid(self, other: "GridFunctional") -> bool:
        return (self.n == other.n and self.x_min == other.x_min
                and self.x_max == other.x_max)

    def is_convex(self, tol: float = 1e-9) -> bool:
        """Discrete convexity on the (contiguous) effective domain."""
        idx = self.dom_indices()
        if idx.size != idx[-1] - idx[0] + 1:
            return False
        v = self.values[idx]
        if v.size < 3:
            return True
        slopes = np.diff(v) / self.h
        return bool(np.all(np.diff(slopes) >= -tol * (1 + np.abs(slopes[1:]))))

    @classmethod
    def from_callable(cls, fn, spec: GridSpec) -> "GridFunctional":
        return cls(spec.x_min, spec.x_max,
                   [float(fn(x)) for x in spec.points()])

    def save_csv(self, path) -> None:
        """Write `x,value` rows; +inf is the literal `inf`."""
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "value"])
            for x, v in zip(self.x, self.values):
                writer.writerow([repr(float(x)),
                                 "inf" if v == INF else repr(float(v))])

    @classmethod
    def load_csv(cls, path) -> "GridFunctional":
        xs, vals = [], []
        with Path(path).open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [c.strip().lower() for c in header] != ["x", "value"]:
                raise GridError(f"{path}: expected header 'x,value'")
            for row in reader:
                if not row:
                    continue
                xs.append(float(row[0]))
                vals.append(INF if row[1].strip() == "inf" else float(row[1]))
        if len(xs) < 2:
            raise GridError(f"{path}: need at least two rows")
        h = np.diff(xs)
        if np.any(np.abs(h - h[0]) > 1e-9 * (1 + abs(h[0]))):
            raise GridError(f"{path}: grid is not uniform")
        return cls(xs[0], xs[-1], vals)


def _hull_vertices(f: GridFunctional):
    """Lower convex hull vertices (x, value) over the finite points."""
    idx = f.dom_indices()
    xs = f.x[idx]
    vs = f.values[idx]
    keep: list[int] = []
    for i in range(xs.size):
        while len(keep) >= 2:
            x0, y0 = xs[keep[-2]], vs[keep[-2]]
            x1, y1 = xs[keep[-1]], vs[keep[-1]]
            cross = (x1 - x0) * (vs[i] - y0) - (xs[i] - x0) * (y1 - y0)
            if cross <= 0.0:  # middle point on or above the chord
                keep.pop()
            else:
                break
        keep.append(i)
    return xs[keep], vs[keep]


class PLConjugate:
    """Exact piecewise-linear representation of a grid conjugate f*.

    f*(s) = s*x_j - f_j where x_j is the hull vertex selected by the slope
    interval containing s; knots are the hull segment slopes.
    """

    __slots__ = ("vertex_x", "vertex_f", "knots")

    def __init__(self, vertex_x: np.ndarray, vertex_f: np.ndarray):
        self.vertex_x = vertex_x
        self.vertex_f = vertex_f
        self.knots = (np.diff(vertex_f) / np.diff(vertex_x)
                      if vertex_x.size > 1 else np.zeros(0))

    @property
    def slope_min(self) -> float:
        return float(self.vertex_x[0])

    @property
    def slope_max(self) -> float:
        return float(self.vertex_x[-1])

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        j = np.searchsorted(self.knots, s, side="left")
        return s * self.vertex_x[j] - self.vertex_f[j]


def conjugate_pl(f: GridFunctional) -> PLConjugate:
    vx, vf = _hull_vertices(f)
    return PLConjugate(vx, vf)


def conjugate_at(f: GridFunctional, s) -> np.ndarray:
    """Exact conjugate values f*(s) = max_i (s x_i - f(x_i))."""
    return conjugate_pl(f)(s)


def default_dual_grid(f: GridFunctional, g: GridFunctional | None = None,
                      n: int | None = None) -> GridSpec:
    """Symmetric dual grid [-S, S] sized by the attained hull slopes."""
    cands = [conjugate_pl(f).knots]
    if g is not None:
        cands.append(conjugate_pl(g).knots)
    mags = [np.max(np.abs(k)) for k in cands if k.size]
    s = max(mags) if mags else 1.0
    s = max(s, 1e-6)
    return GridSpec(-s, s, n if n is not None else f.n)


def conjugate_bruteforce(f: GridFunctional, dual: GridSpec) -> GridFunctional:
    """f*(s) by direct maximization over all finite grid points."""
    idx = f.dom_indices()
    xs = f.x[idx]
    vs = f.values[idx]
    s = dual.points()
    vals = np.max(np.outer(s, xs) - vs[None, :], axis=1)
    return GridFunctional(dual.x_min, dual.x_max, vals)


def conjugate_fast(f: GridFunctional, dual: GridSpec) -> GridFunctional:
    """f*(s) via the hull representation; matches brute force exactly."""
    return GridFunctional(dual.x_min, dual.x_max, conjugate_at(f, dual.points()))


def biconjugate(f: GridFunctional) -> GridFunctional:
    """f** on the same grid: the closed convex envelope of f + indicator.

    Computed exactly by interpolating the lower hull between its vertices;
    equals two exact conjugations with an unrestricted dual variable.
    """
    vx, vf = _hull_vertices(f)
    x = f.x
    vals = np.interp(x, vx, vf)
    vals = np.where((x < vx[0]) | (x > vx[-1]), INF, vals)
    return f.with_values(vals)


@dataclass(frozen=True)
class SubdifferentialInterval:
    lo: float
    hi: float
    empty: bool = False

    def contains(self, s: float, slack: float = 0.0) -> bool:
        return (not self.empty) and self.lo - slack <= s <= self.hi + slack

    def samples(self, k: int) -> np.ndarray:
        if self.empty:
            return np.zeros(0)
        return np.linspace(self.lo, self.hi, max(k, 2))


def subdifferential(f: GridFunctional, i: int) -> SubdifferentialInterval:
    """[backward slope, forward slope] at interior grid index i.

    Empty (with a warning) when x_i is not interior to dom f, or when the
    one-sided slopes cross (no subgradient at a concave kink).
    """
    v = f.values
    if i <= 0 or i >= f.n - 1 or not (np.isfinite(v[i - 1])
                                      and np.isfinite(v[i])
                                      and np.isfinite(v[i + 1])):
        warnings.warn("subdifferential requested outside int(dom f)",
                      stacklevel=2)
        return SubdifferentialInterval(0.0, 0.0, empty=True)
    lo = (v[i] - v[i - 1]) / f.h
    hi = (v[i + 1] - v[i]) / f.h
    if lo > hi + 1e-12 * (1.0 + abs(lo) + abs(hi)):
        return SubdifferentialInterval(0.0, 0.0, empty=True)
    return SubdifferentialInterval(float(min(lo, hi)), float(max(lo, hi)))


def fenchel_young_check(f: GridFunctional, i: int,
                        s: float) -> VerificationRecord:
    """Gap f(x_i) + f*(s) - s*x_i: zero (up to O(h)) iff s in subdiff."""
    if not np.isfinite(f.values[i]):
        raise GridError("fenchel_young_check needs a finite f(x_i)")
    x_i = f.x[i]
    gap = float(f.values[i] + conjugate_at(f, np.array([s]))[0] - s * x_i)
    interval = subdifferential(f, i)
    in_sub = interval.contains(s, slack=1e-12 * (1.0 + abs(s)))
    slack = f.h * (1.0 + abs(s))
    margins = {"gap_nonnegative": gap + 1e-12}
    if in_sub:
        margins["gap_small_when_subgradient"] = slack - gap
    return record_from_margins(
        "functional.fenchel_young",
        {"i": i, "s": s, "in_subdifferential": in_sub}, margins)


class QuadraticFunctional:
    """f_T(x) = (1/2) <T x, x>, represented exactly by its matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.atleast_2d(np.asarray(matrix, dtype=float))
        if m.shape[0] != m.shape[1]:
            raise GridError("quadratic functional needs a square matrix")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_positive_definite(self) -> bool:
        return bool(np.linalg.eigvalsh(self.matrix)[0] > 0.0)

    def __call__(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return float(0.5 * x @ self.matrix @ x)


def quadratic_conjugate(q: QuadraticFunctional) -> QuadraticFunctional:
    """(f_A)* = f_(A^-1); only quadratic when A is positive definite."""
    w, u = np.linalg.eigh(q.matrix)
    if w[0] <= 0.0:
        raise GridError("conjugate of a non-PD quadratic is not quadratic")
    return QuadraticFunctional((u / w) @ u.T)


def sample_quadratic(q: QuadraticFunctional, spec: GridSpec) -> GridFunctional:
    """Sample a 1-D quadratic on a grid: values_i = a x_i^2 / 2."""
    if q.dim != 1:
        raise GridError("only 1-D quadratics can be sampled on a grid")
    a = float(q.matrix[0, 0])
    x = spec.points()
    return GridFunctional(spec.x_min, spec.x_max, 0.5 * a * x * x)

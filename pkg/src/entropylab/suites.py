"""Randomized verification suites and deterministic study generators.

Trials are independent and deterministic per (seed, trial index); the
ENTROPYLAB_THREADS environment variable caps worker threads, and results
are aggregated in canonical trial order regardless of scheduling.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .matrices import PDMatrix, random_spd_from_rng, random_invertible
from .operator_means import (geometric_mean, geometric_mean_integral,
                             gauss_jacobi_unit, check_mean_symmetry,
                             check_agh)
from .operator_entropy import (relative_entropy, relative_entropy_integral,
                               check_identity_routes,
                               check_congruence_property,
                               check_entropy_bounds,
                               check_parametric_sandwich,
                               check_special_value_identity,
                               parametric_entropy_bounds, parametric_entropy)
from .grids import (GridFunctional, GridSpec, QuadraticFunctional,
                    sample_quadratic)
from .functional_means import (func_harmonic, func_geometric,
                               check_pointwise_order, check_func_symmetry)
from .functional_entropy import (func_relative_entropy, func_tsallis,
                                 func_tsallis_conj, func_parametric,
                                 tsallis_conj_at, check_tsallis_conj_bounds, check_skew_symmetry,
                                 check_gradient_sandwich, check_entropy_sandwich_batch,
                                 check_parametric_sandwich_batch)
from .records import SuiteConfig, VerificationReport, VerificationRecord, \
    record_from_margins

SUITES = ("operator", "functional", "crossbackend")


def _max_workers() -> int:
    try:
        return max(1, int(os.environ.get("ENTROPYLAB_THREADS", "1")))
    except ValueError:
        return 1


def random_convex_grid(rng: np.random.Generator,
                       spec: GridSpec) -> GridFunctional:
    """Random finite convex grid functional: integrated nondecreasing slopes
    plus a random affine tilt."""
    slopes = np.cumsum(rng.uniform(0.02, 1.0, spec.n - 1))
    slopes = slopes - slopes[slopes.size // 2] + rng.uniform(-2.0, 2.0)
    vals = np.concatenate([[0.0], np.cumsum(slopes * spec.h)])
    vals = vals - np.min(vals) + rng.uniform(-3.0, 3.0)
    return GridFunctional(spec.x_min, spec.x_max, vals)


def _operator_trial(cfg: SuiteConfig, k: int,
                    seed_child) -> list[VerificationRecord]:
    rng = np.random.default_rng(seed_child)
    dim = cfg.dims[k % len(cfg.dims)]
    a = random_spd_from_rng(dim, rng, cfg.cond_cap)
    b = random_spd_from_rng(dim, rng, cfg.cond_cap)
    t = random_invertible(dim, rng)
    recs = [
        check_entropy_bounds(a, b, cfg.order_tol),
        check_congruence_property(a, b, t, 10 * cfg.identity_tol),
        check_special_value_identity(a, cfg.identity_tol),
    ]
    for p in cfg.p_values:
        recs.append(check_mean_symmetry(a, b, p, cfg.identity_tol))
        recs.append(check_agh(a, b, p, cfg.order_tol))
        if 0.0 < p < 1.0:
            recs.append(check_identity_routes(a, b, p, cfg.identity_tol))
            recs.append(check_parametric_sandwich(a, b, p, cfg.order_tol))
            recs.append(check_gradient_sandwich(
                QuadraticFunctional(a.entries), QuadraticFunctional(b.entries),
                p, cfg.identity_tol))
    for rec in recs:
        rec.instance.setdefault("trial", k)
    return recs


def _functional_trial(cfg: SuiteConfig, k: int,
                      seed_child) -> list[VerificationRecord]:
    rng = np.random.default_rng(seed_child)
    spec = GridSpec(cfg.x_min, cfg.x_max, cfg.n)
    f = random_convex_grid(rng, spec)
    g = random_convex_grid(rng, spec)
    interior = rng.integers(cfg.n // 4, 3 * cfg.n // 4, size=5)
    recs = list(check_entropy_sandwich_batch(f, g, interior, cfg.nodes_entropy,
                                      slack_c=cfg.slack_c))
    for p in cfg.p_values:
        recs.append(check_pointwise_order(f, g, p, cfg.order_tol,
                                          cfg.nodes_means))
        recs.append(check_func_symmetry(f, g, p, 100 * cfg.identity_tol,
                                        cfg.nodes_means))
        if 0.0 < p < 1.0:
            recs.append(check_tsallis_conj_bounds(f, g, p, nodes=cfg.nodes_means))
            recs.append(check_skew_symmetry(f, g, p, cfg.nodes_means,
                                     cfg.nodes_entropy))
            recs.extend(check_parametric_sandwich_batch(
                f, g, p, interior, nodes_means=cfg.nodes_means,
                nodes_entropy=cfg.nodes_entropy, slack_c=cfg.slack_c))
    for rec in recs:
        rec.instance.setdefault("trial", k)
    return recs


CROSSBACKEND_COEFFS = (0.5, 1.0, 2.0, 4.0)
CROSSBACKEND_P = (0.25, 0.5, 0.75)
CROSSBACKEND_WINDOW = (-2.0, 2.0)
# Wide, fine grid pinned for the backend comparison table; the sup-norm
# tolerance is only meaningful on a fixed discretization.
CROSSBACKEND_SPEC = GridSpec(-10.0, 10.0, 4001)


def _crossbackend_pair(cfg: SuiteConfig, a_val: float,
                       b_val: float) -> list[VerificationRecord]:
    """Grid backend vs exact quadratic backend on sampled 1-D quadratics."""
    spec = CROSSBACKEND_SPEC
    qa, qb = QuadraticFunctional([[a_val]]), QuadraticFunctional([[b_val]])
    f, g = sample_quadratic(qa, spec), sample_quadratic(qb, spec)
    x = f.x
    lo, hi = CROSSBACKEND_WINDOW
    win = (x >= lo) & (x <= hi)
    s_dual = np.linspace(lo, hi, 401)
    tol = cfg.crossbackend_tol

    def sup_gap(vals, coeff):
        return float(np.max(np.abs(vals - 0.5 * coeff * x * x)[win]))

    recs = []
    s_exact = func_relative_entropy(qa, qb).matrix[0, 0]
    s_grid = func_relative_entropy(f, g, cfg.nodes_entropy)
    recs.append(record_from_margins(
        "crossbackend.relative_entropy", {"a": a_val, "b": b_val},
        {"sup_gap": tol - sup_gap(s_grid.values, s_exact)}))
    for p in CROSSBACKEND_P:
        inst = {"a": a_val, "b": b_val, "p": p}
        h_exact = func_harmonic(qa, qb, p).matrix[0, 0]
        h_grid = func_harmonic(f, g, p)
        recs.append(record_from_margins(
            "crossbackend.harmonic", inst,
            {"sup_gap": tol - sup_gap(h_grid.values, h_exact)}))
        g_exact = func_geometric(qa, qb, p).matrix[0, 0]
        g_grid = func_geometric(f, g, p, cfg.nodes_means)
        recs.append(record_from_margins(
            "crossbackend.geometric", inst,
            {"sup_gap": tol - sup_gap(g_grid.values, g_exact)}))
        t_exact = func_tsallis(qa, qb, p).matrix[0, 0]
        t_grid = func_tsallis(f, g, p, cfg.nodes_means)
        recs.append(record_from_margins(
            "crossbackend.tsallis", inst,
            {"sup_gap": tol - sup_gap(t_grid.values, t_exact)}))
        tc_exact = func_tsallis_conj(qa, qb, p).matrix[0, 0]
        tc_grid = tsallis_conj_at(f, g, p, s_dual)
        recs.append(record_from_margins(
            "crossbackend.tsallis_conj", inst,
            {"sup_gap": tol - float(np.max(np.abs(
                tc_grid - 0.5 * tc_exact * s_dual * s_dual)))}))
        sp_exact = func_parametric(qa, qb, p).matrix[0, 0]
        sp_grid = func_parametric(f, g, p, cfg.nodes_means, cfg.nodes_entropy)
        recs.append(record_from_margins(
            "crossbackend.parametric", inst,
            {"sup_gap": tol - sup_gap(sp_grid.values, sp_exact)}))
    return recs


def func_tsallis_conj_scalar(a_val: float, b_val: float, p: float) -> float:
    """T_p(a^-1 | b^-1) for scalars: ((1/a)^(1-p)(1/b)^p - 1/a)/p."""
    ia, ib = 1.0 / a_val, 1.0 / b_val
    return (ia ** (1.0 - p) * ib ** p - ia) / p


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    """Run one named suite; deterministic given (config, seed)."""
    if cfg.suite not in SUITES:
        raise ValueError(f"unknown suite {cfg.suite!r}; pick one of {SUITES}")
    started = time.monotonic()
    report = VerificationReport(cfg)
    if cfg.suite == "crossbackend":
        for a_val in CROSSBACKEND_COEFFS:
            for b_val in CROSSBACKEND_COEFFS:
                report.extend(_crossbackend_pair(cfg, a_val, b_val))
        return report.finalize(started)
    trial_fn = (_operator_trial if cfg.suite == "operator"
                else _functional_trial)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    workers = _max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(
                lambda args: trial_fn(cfg, *args),
                list(enumerate(children))))
    else:
        batches = [trial_fn(cfg, k, child)
                   for k, child in enumerate(children)]
    for batch in batches:
        report.extend(batch)
    return report.finalize(started)


def convergence_rows(seed: int = 7) -> list[dict]:
    """Node-count sweep for both quadrature routes on a fixed stiff pair."""
    a = PDMatrix(np.eye(2))
    b = PDMatrix(np.diag([100.0, 0.01]))
    p = 0.3
    exact_g = geometric_mean(a, b, p).entries
    exact_s = relative_entropy(a, b).entries
    rows = []
    for nodes in (8, 16, 32, 64, 128):
        gerr = np.linalg.norm(
            geometric_mean_integral(a, b, p, nodes).entries - exact_g,
            "fro") / np.linalg.norm(exact_g, "fro")
        serr = np.linalg.norm(
            relative_entropy_integral(a, b, nodes).entries - exact_s,
            "fro") / (1.0 + np.linalg.norm(exact_s, "fro"))
        wsum = float(np.sum(gauss_jacobi_unit(p, nodes)[1]))
        rows.append({"nodes": nodes, "geometric_mean_error": float(gerr),
                     "relative_entropy_error": float(serr),
                     "weight_sum_minus_one": wsum - 1.0})
    return rows


def sandwich_rows(a_val: float = 1.0, b_val: float = 4.0,
                  p_values=None) -> list[dict]:
    """Parametric entropy sandwich for scalars across a p grid."""
    p_values = p_values if p_values is not None else [
        round(0.1 * k, 1) for k in range(1, 10)]
    a, b = PDMatrix([[a_val]]), PDMatrix([[b_val]])
    rows = []
    for p in p_values:
        low, high = parametric_entropy_bounds(a, b, p)
        sp = parametric_entropy(a, b, p).entries[0, 0]
        rows.append({"p": p, "lower": float(low.entries[0, 0]),
                     "value": float(sp),
                     "upper": float(high.entries[0, 0]),
                     "lower_margin": float(sp - low.entries[0, 0]),
                     "upper_margin": float(high.entries[0, 0] - sp)})
    return rows

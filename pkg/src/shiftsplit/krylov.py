"""Krylov solvers with the reporting contract the benchmarks rely on.

All solvers take a bare callable as the operator, start from the zero
vector unless told otherwise, track per-iteration relative residuals
(first entry is the initial guess) and never randomize, so repeated runs
are bitwise reproducible.
"""

import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

__all__ = ["SolveReport", "StoppingRule", "cg", "fgmres", "gmres"]


@dataclass
class StoppingRule:
    """Stopping parameters for the outer solve and the inner solves.

    rel_tol applies to ||b - A x|| / ||b||; inner_reduction is the relative
    residual reduction demanded of an inner (preconditioner) solve and
    max_inner its iteration cap.
    """

    rel_tol: float = 1e-7
    max_outer: int = 1000
    inner_reduction: float = 1e-2
    max_inner: int = 100

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError("rel_tol must lie in (0, 1)")
        if not (0.0 < self.inner_reduction < 1.0):
            raise ValueError("inner_reduction must lie in (0, 1)")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration caps must be positive")


@dataclass
class SolveReport:
    """Outcome of one linear solve."""

    iterations: int
    converged: bool
    relative_residuals: list[float]
    wall_seconds: float
    inner_iterations_total: int
    final_solution: np.ndarray
    breakdown: bool = False
    diverged: bool = False
    stagnated: bool = False


def _trivial_report(x, t0):
    return SolveReport(0, True, [0.0], time.perf_counter() - t0, 0, x)


def cg(op, b, rule=None, x0=None):
    """Conjugate gradients for a symmetric positive definite operator.

    A nonpositive curvature p^T A p flags breakdown and stops the solve.
    """
    rule = rule or StoppingRule()
    t0 = time.perf_counter()
    b = np.asarray(b, dtype=np.float64)
    n = b.size
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return _trivial_report(np.zeros(n), t0)
    r = b - op(x) if x.any() else b.copy()
    history = [float(np.linalg.norm(r)) / bnorm]
    if history[0] <= rule.rel_tol:
        return SolveReport(0, True, history, time.perf_counter() - t0, 0, x)
    p = r.copy()
    rs = float(r @ r)
    converged = False
    breakdown = False
    iterations = 0
    for _ in range(rule.max_outer):
        ap = op(p)
        pap = float(p @ ap)
        if pap <= 0.0:
            breakdown = True
            break
        step = rs / pap
        x = x + step * p
        r = r - step * ap
        iterations += 1
        history.append(float(np.linalg.norm(r)) / bnorm)
        if history[-1] <= rule.rel_tol:
            converged = True
            break
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
    if converged:
        # final entry is re-verified against a fresh residual
        history[-1] = float(np.linalg.norm(b - op(x))) / bnorm
        converged = history[-1] <= rule.rel_tol
    return SolveReport(
        iterations,
        converged,
        history,
        time.perf_counter() - t0,
        0,
        x,
        breakdown=breakdown,
    )


def _inner_count(precond):
    return int(getattr(precond, "inner_iterations", 0)) if precond is not None else 0


def _gmres_core(op, b, x0, rule, restart, precond, flexible):
    t0 = time.perf_counter()
    b = np.asarray(b, dtype=np.float64)
    n = b.size
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    bnorm = float(np.linalg.norm(b))
    inner0 = _inner_count(precond)
    if bnorm == 0.0:
        return _trivial_report(np.zeros(n), t0)
    r = b - op(x) if x.any() else b.copy()
    rnorm = float(np.linalg.norm(r))
    history = [rnorm / bnorm]
    if history[0] <= rule.rel_tol:
        return SolveReport(0, True, history, time.perf_counter() - t0, 0, x)

    max_steps = rule.max_outer
    total = 0
    converged = False
    stagnated = False
    prev_cycle = None
    while total < max_steps and not converged and not stagnated:
        k_max = min(restart or max_steps, max_steps - total)
        cap = min(k_max, 128)  # basis storage grows on demand
        v_basis = np.empty((n, cap + 1))
        z_basis = np.empty((n, cap)) if flexible else None
        h = np.zeros((k_max + 1, k_max))
        cs = np.zeros(k_max)
        sn = np.zeros(k_max)
        g = np.zeros(k_max + 1)
        v_basis[:, 0] = r / rnorm
        g[0] = rnorm
        done = 0
        for j in range(k_max):
            if j + 1 > cap:
                cap = min(k_max, 2 * cap)
                grown = np.empty((n, cap + 1))
                grown[:, : j + 1] = v_basis[:, : j + 1]
                v_basis = grown
                if flexible:
                    grown_z = np.empty((n, cap))
                    grown_z[:, :j] = z_basis[:, :j]
                    z_basis = grown_z
            z = precond(v_basis[:, j]) if precond is not None else v_basis[:, j]
            if flexible:
                z_basis[:, j] = z
            w = op(z)
            wnorm0 = float(np.linalg.norm(w))
            for i in range(j + 1):  # modified Gram-Schmidt
                hij = float(v_basis[:, i] @ w)
                h[i, j] = hij
                w = w - hij * v_basis[:, i]
            hj1 = float(np.linalg.norm(w))
            h[j + 1, j] = hj1
            for i in range(j):
                tmp = cs[i] * h[i, j] + sn[i] * h[i + 1, j]
                h[i + 1, j] = -sn[i] * h[i, j] + cs[i] * h[i + 1, j]
                h[i, j] = tmp
            denom = float(np.hypot(h[j, j], h[j + 1, j]))
            if denom == 0.0:
                # the operator annihilated the new direction entirely
                stagnated = True
                done = j
                break
            cs[j] = h[j, j] / denom
            sn[j] = h[j + 1, j] / denom
            h[j, j] = cs[j] * h[j, j] + sn[j] * h[j + 1, j]
            h[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]
            total += 1
            done = j + 1
            history.append(abs(g[j + 1]) / bnorm)
            if history[-1] <= rule.rel_tol:
                converged = True
                break
            if hj1 <= 1e-14 * max(wnorm0, 1e-300):
                # invariant subspace reached without meeting the tolerance
                stagnated = True
                break
            v_basis[:, j + 1] = w / hj1
        if done:
            y = solve_triangular(h[:done, :done], g[:done], lower=False)
            update_basis = z_basis if flexible else v_basis
            x = x + update_basis[:, :done] @ y
        r = b - op(x)
        rnorm = float(np.linalg.norm(r))
        true_res = rnorm / bnorm
        history[-1] = true_res  # recurrence value re-verified at cycle end
        converged = true_res <= rule.rel_tol
        if converged or stagnated:
            break
        if restart and prev_cycle is not None and prev_cycle - true_res < 1e-14 * prev_cycle:
            stagnated = True
            break
        prev_cycle = true_res
    return SolveReport(
        total,
        converged,
        history,
        time.perf_counter() - t0,
        _inner_count(precond) - inner0,
        x,
        stagnated=stagnated,
    )


def gmres(op, b, restart=None, rule=None, x0=None):
    """GMRES with modified Gram-Schmidt and Givens rotations.

    restart=None runs the unrestarted method. iterations counts Arnoldi
    steps across all cycles; the recurrence residual is re-verified against
    a true residual at every restart.
    """
    rule = rule or StoppingRule()
    if restart is not None and restart < 1:
        raise ValueError("restart length must be positive")
    return _gmres_core(op, b, x0, rule, restart, None, flexible=False)


def fgmres(op, b, precond_apply=None, rule=None, x0=None):
    """Flexible GMRES, right preconditioned and unrestarted.

    precond_apply maps a residual to a preconditioned direction and may
    change between iterations (inexact inner solves). When it exposes an
    `inner_iterations` counter the report accumulates the difference into
    inner_iterations_total.
    """
    rule = rule or StoppingRule()
    return _gmres_core(op, b, x0, rule, None, precond_apply, flexible=True)

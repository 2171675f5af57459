"""The shift-splitting stationary iteration and its convergence analysis.

The splitting of the saddle matrix script-A is

    script-A = (1/2)(alpha I + script-A) - (1/2)(alpha I - script-A),

giving the fixed point iteration

    (alpha I + script-A) x_{k+1} = (alpha I - script-A) x_k + 2 f

with iteration matrix M(alpha) = (alpha I + script-A)^{-1}(alpha I - script-A).
Each eigenpair (lambda, [x; y]) of M(alpha), with the top block normalized
to ||x|| = 1, satisfies

    alpha^2 (lambda - 1)^2 + alpha (lambda^2 - 1) a + (lambda + 1)^2 (s + i t) = 0

where a = x* A x and s + i t = x* B^T C x.
"""

import time
from dataclasses import dataclass

import numpy as np

from .dense import eigvals
from .krylov import SolveReport, StoppingRule
from .preconditioners import Preconditioner, PrecondSpec
from .saddle import DESK_SCALE, assemble_matrix, block_operator

__all__ = [
    "EigenRow",
    "SSConvergenceReport",
    "analyze_convergence",
    "eigen_quadratic_residual",
    "iteration_matrix",
    "no_eigenvalue_near_unit",
    "ss_solve",
]

_DIVERGENCE_GUARD = 1e6


def ss_solve(system, f, alpha, rule=None, inner="auto", x0=None, callback=None):
    """Run the stationary iteration until the true residual meets the rule.

    Each sweep recomputes r = f - script-A x, stops on ||r||/||f|| <= rel_tol
    or the cap, aborts with the diverged flag when the relative residual
    exceeds 1e6, and otherwise updates x += 2 z where (alpha I + script-A) z = r.
    callback, when given, sees every iterate whose residual was evaluated,
    the initial guess included, so it runs in step with the history.
    """
    rule = rule or StoppingRule()
    t0 = time.perf_counter()
    f = np.asarray(f, dtype=np.float64)
    pre = Preconditioner(system, PrecondSpec("ss", alpha, inner_policy=inner, rule=rule))
    op = block_operator(system)
    x = np.zeros(system.order) if x0 is None else np.array(x0, dtype=np.float64)
    fnorm = float(np.linalg.norm(f))
    if fnorm == 0.0:
        return SolveReport(0, True, [0.0], time.perf_counter() - t0, 0, x)
    history = []
    converged = False
    diverged = False
    iterations = 0
    while True:
        r = f - op(x)
        rk = float(np.linalg.norm(r)) / fnorm
        history.append(rk)
        if callback is not None:
            callback(x)
        if rk <= rule.rel_tol:
            converged = True
            break
        if rk > _DIVERGENCE_GUARD:
            diverged = True
            break
        if iterations >= rule.max_outer:
            break
        x = x + 2.0 * pre.apply(r)
        iterations += 1
    return SolveReport(
        iterations,
        converged,
        history,
        time.perf_counter() - t0,
        pre.inner_iterations,
        x,
        diverged=diverged,
    )


def iteration_matrix(system, alpha):
    """Dense M(alpha) = (alpha I + script-A)^{-1}(alpha I - script-A)."""
    if system.order > DESK_SCALE:
        raise ValueError(f"dense iteration matrix refused beyond order {DESK_SCALE}")
    a_dense = assemble_matrix(system).toarray()
    shifted = alpha * np.eye(system.order)
    return np.linalg.solve(shifted + a_dense, shifted - a_dense)


@dataclass(frozen=True)
class EigenRow:
    """One eigenvalue of M(alpha) with its quadratic-form data.

    a = x* A x, s + i t = x* B^T C x for the unit-normalized top block x of
    the eigenvector. condition_holds records s > 0 and |t| < a sqrt(s).
    """

    value: complex
    a: float
    s: float
    t: float
    condition_holds: bool


@dataclass(frozen=True)
class SSConvergenceReport:
    alpha: float
    spectral_radius: float
    eigdata: list[EigenRow]
    c_equals_kb: bool


def _eigenvector(m_complex, value, fro_norm, rng):
    """Eigenvector by inverse iteration seeded at a computed eigenvalue."""
    order = m_complex.shape[0]
    eye = np.eye(order, dtype=np.complex128)
    v = rng.standard_normal(order) + 1j * rng.standard_normal(order)
    v /= np.linalg.norm(v)
    best, best_res = v, np.inf
    perturb = 1e-12 * (1.0 + abs(value)) + 1e-14 * fro_norm
    for _ in range(8):
        try:
            w = np.linalg.solve(m_complex - (value + perturb) * eye, v)
        except np.linalg.LinAlgError:
            perturb *= 1e3
            continue
        wn = np.linalg.norm(w)
        if not np.isfinite(wn) or wn == 0.0:
            perturb *= 1e3
            continue
        v = w / wn
        res = float(np.linalg.norm(m_complex @ v - value * v))
        if res < best_res:
            best, best_res = v, res
        if res <= 1e-10 * max(fro_norm, 1.0):
            break
    return best


def analyze_convergence(system, alpha):
    """Spectral analysis of the stationary iteration at one shift.

    Reports the spectral radius and, per eigenvalue, the quadratic-form
    data (a, s, t) of its eigenvector together with the sufficient
    condition s > 0 and |t| < a sqrt(s).
    """
    m_alpha = iteration_matrix(system, alpha)
    values = eigvals(m_alpha)
    m_complex = m_alpha.astype(np.complex128)
    fro = float(np.linalg.norm(m_alpha))
    a_dense = system.A.toarray()
    bt_dense = system.Bt.toarray()
    c_dense = system.C.toarray()
    rng = np.random.default_rng(7)
    rows = []
    for value in values:
        vec = _eigenvector(m_complex, value, fro, rng)
        x = vec[: system.n]
        xn = np.linalg.norm(x)
        if xn == 0.0:
            raise np.linalg.LinAlgError("eigenvector with zero top block")
        x = x / xn
        a = float(np.real(np.vdot(x, a_dense @ x)))
        coupling = complex(np.vdot(x, bt_dense @ (c_dense @ x)))
        s, t = coupling.real, coupling.imag
        holds = s > 0.0 and abs(t) < a * np.sqrt(s)
        rows.append(EigenRow(complex(value), a, s, t, holds))
    k = system.c_equals_kb
    return SSConvergenceReport(
        alpha=float(alpha),
        spectral_radius=float(np.max(np.abs(values))) if values.size else 0.0,
        eigdata=rows,
        c_equals_kb=(k is not None and k > 0.0),
    )


def eigen_quadratic_residual(alpha, value, a, s, t):
    """Modulus of alpha^2 (z-1)^2 + alpha (z^2-1) a + (z+1)^2 (s + i t)."""
    z = complex(value)
    return abs(
        alpha**2 * (z - 1.0) ** 2
        + alpha * (z * z - 1.0) * a
        + (z + 1.0) ** 2 * (s + 1j * t)
    )


def no_eigenvalue_near_unit(report, tol=1e-8):
    """True when no eigenvalue of M(alpha) lies within tol of +1 or -1."""
    for row in report.eigdata:
        if abs(row.value - 1.0) <= tol or abs(row.value + 1.0) <= tol:
            return False
    return True

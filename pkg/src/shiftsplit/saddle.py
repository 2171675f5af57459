"""Asymmetric saddle point systems.

The block system is

    [ A   B^T ] [x]   [f1]
    [-C   0   ] [y] = [f2]

with A an n x n symmetric positive definite matrix and B, C full-rank
m x n matrices, m <= n. The product B^T C is only ever applied as an
operator (three sparse products), never assembled.
"""

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dense import norm2_est
from .sparse import (
    SparseMatrix,
    add,
    build_tridiag,
    identity,
    kron,
    scale,
    transpose,
    vstack,
)

__all__ = [
    "DESK_SCALE",
    "AssumptionReport",
    "SaddleSystem",
    "alpha_est",
    "assemble_matrix",
    "block_apply",
    "block_operator",
    "build_stokes",
    "check_assumptions",
    "coupling_norm",
    "min_a_eigenvalue",
    "rhs_all_ones",
    "split_external",
]

# Largest order for which dense analysis paths (spectra, rank checks,
# direct inner solves) are permitted.
DESK_SCALE = 2000


@dataclass(frozen=True)
class SaddleSystem:
    """Blocks of one saddle point system.

    c_equals_kb records, when not None, that C was built as k * B with the
    stored k; several solver choices key off that structure.
    """

    A: SparseMatrix
    B: SparseMatrix
    C: SparseMatrix
    n: int
    m: int
    c_equals_kb: float | None = None

    def __post_init__(self):
        if self.A.shape != (self.n, self.n):
            raise ValueError(f"A must be {self.n} x {self.n}, got {self.A.shape}")
        if self.B.shape != (self.m, self.n):
            raise ValueError(f"B must be {self.m} x {self.n}, got {self.B.shape}")
        if self.C.shape != (self.m, self.n):
            raise ValueError(f"C must be {self.m} x {self.n}, got {self.C.shape}")
        if not (1 <= self.m <= self.n):
            raise ValueError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.c_equals_kb is not None:
            if self.C != scale(self.B, self.c_equals_kb):
                raise ValueError("c_equals_kb is set but C != k * B")

    @cached_property
    def Bt(self):
        return transpose(self.B)

    @cached_property
    def Ct(self):
        return transpose(self.C)

    @cached_property
    def At(self):
        return transpose(self.A)

    @property
    def order(self):
        return self.n + self.m


def build_stokes(s, mu=1.0, k=2.0):
    """Leaky-lid driven cavity Stokes discretization on an s x s grid.

    With h = 1/(s+1):
        T = (mu/h^2) tridiag(-1, 2, -1)   order s
        F = (1/h)    tridiag(-1, 1, 0)    order s (zero superdiagonal unstored)
        A = blockdiag(I (x) T + T (x) I, I (x) T + T (x) I)   order n = 2 s^2
        B^T = [I (x) F ; F (x) I]         so B is m x n with m = s^2
        C = k B
    """
    s = int(s)
    if s < 1:
        raise ValueError("grid parameter s must be at least 1")
    if mu <= 0:
        raise ValueError("viscosity mu must be positive")
    if k <= 0:
        raise ValueError("coupling factor k must be positive")
    h = 1.0 / (s + 1)
    t = build_tridiag(s, -1.0, 2.0, -1.0, scale=mu / h**2)
    f = build_tridiag(s, -1.0, 1.0, 0.0, scale=1.0 / h)
    eye = identity(s)
    lap = add(kron(eye, t), kron(t, eye))
    a = kron(identity(2), lap)
    bt = vstack(kron(eye, f), kron(f, eye))
    b = transpose(bt)
    c = scale(b, k)
    return SaddleSystem(a, b, c, n=2 * s * s, m=s * s, c_equals_kb=float(k))


def _block(mat, r0, r1, c0, c1):
    """Extract mat[r0:r1, c0:c1] as a new sparse matrix."""
    i, j, v = mat.tocoo()
    keep = (i >= r0) & (i < r1) & (j >= c0) & (j < c1)
    return SparseMatrix.from_coo(r1 - r0, c1 - c0, i[keep] - r0, j[keep] - c0, v[keep])


def split_external(mat, n, m):
    """Split an assembled (n+m) x (n+m) matrix into saddle blocks.

    Expects the layout [[A, B^T], [-C, 0]]; the stored (2,2) block must be
    zero to 1e-14 or a structure error is raised.
    """
    n = int(n)
    m = int(m)
    if mat.shape != (n + m, n + m):
        raise ValueError(
            f"matrix order {mat.shape} does not match n + m = {n + m}"
        )
    a = _block(mat, 0, n, 0, n)
    bt = _block(mat, 0, n, n, n + m)
    minus_c = _block(mat, n, n + m, 0, n)
    zero_block = _block(mat, n, n + m, n, n + m)
    if zero_block.nnz and np.max(np.abs(zero_block.values)) > 1e-14:
        raise ValueError(
            "lower-right block must be zero, found entry of magnitude "
            f"{np.max(np.abs(zero_block.values)):.3e}"
        )
    return SaddleSystem(a, transpose(bt), scale(minus_c, -1.0), n=n, m=m)


def assemble_matrix(system):
    """Assemble the sparse block matrix [[A, B^T], [-C, 0]]."""
    n, m = system.n, system.m
    ia, ja, va = system.A.tocoo()
    ib, jb, vb = system.Bt.tocoo()
    ic, jc, vc = system.C.tocoo()
    i = np.concatenate([ia, ib, ic + n])
    j = np.concatenate([ja, jb + n, jc])
    v = np.concatenate([va, vb, -vc])
    return SparseMatrix.from_coo(n + m, n + m, i, j, v)


def block_apply(system, x):
    """Apply the saddle matrix to a stacked vector without assembling it."""
    x = np.asarray(x)
    if x.shape != (system.order,):
        raise ValueError(f"operand has shape {x.shape}, expected ({system.order},)")
    x1, x2 = x[: system.n], x[system.n :]
    top = system.A.matvec(x1) + system.Bt.matvec(x2)
    bottom = -system.C.matvec(x1)
    return np.concatenate([top, bottom])


def block_operator(system):
    """Closure form of block_apply for the Krylov solvers."""

    def op(x):
        return block_apply(system, x)

    return op


def rhs_all_ones(system):
    """Right-hand side whose exact solution is the all-ones vector."""
    return block_apply(system, np.ones(system.order))


def coupling_norm(system, tol=1e-4, maxit=1000):
    """Power-iteration estimate of ||B^T C||_2 (operator form)."""
    bt, c, ct, b = system.Bt, system.C, system.Ct, system.B

    def forward(x):
        return bt.matvec(c.matvec(x))

    def backward(x):
        return ct.matvec(b.matvec(x))

    return norm2_est(forward, system.n, apply_t=backward, tol=tol, maxit=maxit)


def alpha_est(system, tol=1e-4, maxit=1000):
    """Shift estimate ||B^T C||_2 / ||A||_2 via power iteration.

    Warns when either norm estimate hits the iteration cap before the
    relative-change tolerance is met.
    """
    num = coupling_norm(system, tol=tol, maxit=maxit)
    den = norm2_est(
        system.A.matvec, system.n, apply_t=system.At.matvec, tol=tol, maxit=maxit
    )
    if not (num.converged and den.converged):
        warnings.warn("norm estimate did not converge; shift estimate is approximate")
    if den.value == 0.0:
        raise ValueError("A has zero norm, shift estimate undefined")
    return num.value / den.value


def min_a_eigenvalue(system):
    """Smallest eigenvalue of A (dense, desk scale only)."""
    if system.n > DESK_SCALE:
        raise ValueError(f"dense eigenvalue check refused beyond order {DESK_SCALE}")
    return float(np.min(np.linalg.eigvalsh(system.A.toarray())))


@dataclass(frozen=True)
class AssumptionReport:
    a_symmetric: bool
    a_positive_definite: bool
    rank_b_full: bool
    rank_c_full: bool
    checked_at_scale: bool


def check_assumptions(system):
    """Check the structural assumptions on the blocks.

    Symmetry of A is checked entrywise at any size. Positive definiteness
    and the rank conditions use dense factorizations and are only asserted
    up to DESK_SCALE; beyond that they are reported unchecked (False) with
    checked_at_scale False.
    """
    sym = system.A == system.At
    if system.order > DESK_SCALE:
        return AssumptionReport(sym, False, False, False, checked_at_scale=False)
    a_dense = system.A.toarray()
    pd = False
    if sym:
        try:
            np.linalg.cholesky(a_dense)
            pd = True
        except np.linalg.LinAlgError:
            pd = False
    rank_b = int(np.linalg.matrix_rank(system.B.toarray())) == system.m
    rank_c = int(np.linalg.matrix_rank(system.C.toarray())) == system.m
    return AssumptionReport(sym, pd, rank_b, rank_c, checked_at_scale=True)

"""Saddle point preconditioners applied through block elimination.

Four variants, each applied by solving one or two reduced systems instead
of the full block matrix (I is sized by context, alpha > 0):

  ss    P = (1/2) [[alpha I + A, B^T], [-C, alpha I]];
        the apply drops the 1/2 and solves (alpha I + script-A) z = r via
        t = r1 - (1/alpha) B^T r2,
        (alpha I + A + (1/alpha) B^T C) z1 = t,
        z2 = (C z1 + r2) / alpha.
  rss   P = [[A, B^T], [-C, alpha I]]; same elimination with the
        unshifted Schur operator A + (1/alpha) B^T C.
  ppss  P = (1/(2 alpha)) (alpha I + H)(alpha I + S) with
        H = [[A, 0], [0, 0]], S = [[0, B^T], [-C, 0]]; the apply computes
        the exact inverse z = 2 alpha (alpha I + S)^{-1} (alpha I + H)^{-1} r.
  aug   P = [[A + (1/alpha) B^T C, B^T], [0, alpha I]];
        z2 = r2 / alpha, then (A + (1/alpha) B^T C) z1 = r1 - B^T z2.

B^T C is never assembled; the Schur-stage systems are solved either by an
inner Krylov method (CG when the operator is known symmetric positive
definite, restarted GMRES(10) otherwise) or by a cached dense LU at desk
scale.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .krylov import StoppingRule, cg, gmres
from .saddle import DESK_SCALE

__all__ = [
    "INNER_POLICIES",
    "KINDS",
    "PrecondSpec",
    "Preconditioner",
    "SchurOperator",
    "apply_aug",
    "apply_ppss",
    "apply_rss",
    "apply_ss",
    "select_inner",
]

KINDS = ("ss", "rss", "ppss", "aug")
INNER_POLICIES = ("auto", "cg", "gmres10", "direct")


@dataclass(frozen=True)
class PrecondSpec:
    """Which preconditioner to apply and how to solve its inner systems."""

    kind: str
    alpha: float
    inner_policy: str = "auto"
    rule: StoppingRule = field(default_factory=StoppingRule)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown preconditioner kind '{self.kind}'")
        if self.inner_policy not in INNER_POLICIES:
            raise ValueError(f"unknown inner policy '{self.inner_policy}'")
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")


class SchurOperator:
    """Matrix-free x -> shift x [+ A x] + (1/alpha) B^T (C x).

    include_a=False gives the second-stage operator of the ppss apply,
    shift I + (1/alpha) B^T C.
    """

    def __init__(self, system, alpha, shift=0.0, include_a=True):
        self.system = system
        self.alpha = float(alpha)
        self.shift = float(shift)
        self.include_a = include_a

    @property
    def size(self):
        return self.system.n

    def __call__(self, x):
        y = self.system.Bt.matvec(self.system.C.matvec(x)) / self.alpha
        if self.include_a:
            y = y + self.system.A.matvec(x)
        if self.shift:
            y = y + self.shift * x
        return y

    def toarray(self):
        """Dense form, desk scale only."""
        if self.size > DESK_SCALE:
            raise ValueError(f"refusing to materialize an operator of order {self.size}")
        sys = self.system
        out = sys.Bt.toarray() @ sys.C.toarray() / self.alpha
        if self.include_a:
            out += sys.A.toarray()
        if self.shift:
            out[np.diag_indices_from(out)] += self.shift
        return out


def select_inner(system, spec):
    """Resolve the inner solver for the Schur-stage systems.

    auto picks CG exactly when C = k B with k > 0 (the operator is then
    symmetric positive definite) and GMRES(10) otherwise. direct is only
    allowed at desk scale.
    """
    if spec.inner_policy == "direct":
        if system.n > DESK_SCALE:
            raise ValueError(f"direct inner solves refused beyond order {DESK_SCALE}")
        return "direct"
    if spec.inner_policy != "auto":
        return spec.inner_policy
    k = system.c_equals_kb
    return "cg" if (k is not None and k > 0.0) else "gmres10"


class Preconditioner:
    """Reusable apply engine for one (system, spec) pair.

    Inner Krylov iterations are accumulated in inner_iterations and inner
    solves that hit their cap are counted in inner_failures; the outer
    flexible method keeps going with the inexact direction either way.
    Calling the instance applies the preconditioner to one residual.
    """

    def __init__(self, system, spec):
        self.system = system
        self.spec = spec
        self.inner_iterations = 0
        self.inner_failures = 0
        schur_choice = select_inner(system, spec)
        alpha = spec.alpha
        if spec.kind == "ss":
            schur_op = SchurOperator(system, alpha, shift=alpha)
        elif spec.kind == "ppss":
            schur_op = SchurOperator(system, alpha, shift=alpha, include_a=False)
        else:  # rss, aug share the unshifted Schur operator
            schur_op = SchurOperator(system, alpha)
        self._schur_solve = self._make_solver(schur_op, schur_choice)
        if spec.kind == "ppss":
            stage1 = _ShiftedA(system, alpha)
            stage1_choice = "cg" if spec.inner_policy == "auto" else schur_choice
            self._stage1_solve = self._make_solver(stage1, stage1_choice)

    def _make_solver(self, op, choice):
        rule = self.spec.rule
        if choice == "direct":
            factor = scipy.linalg.lu_factor(op.toarray())

            def solve(rhs):
                return scipy.linalg.lu_solve(factor, rhs)

            return solve
        inner_rule = StoppingRule(
            rel_tol=rule.inner_reduction,
            max_outer=rule.max_inner,
            inner_reduction=rule.inner_reduction,
            max_inner=rule.max_inner,
        )
        if choice == "cg":

            def solve(rhs):
                report = cg(op, rhs, rule=inner_rule)
                self.inner_iterations += report.iterations
                if not report.converged:
                    self.inner_failures += 1
                return report.final_solution

            return solve

        def solve(rhs):
            report = gmres(op, rhs, restart=10, rule=inner_rule)
            self.inner_iterations += report.iterations
            if not report.converged:
                self.inner_failures += 1
            return report.final_solution

        return solve

    def apply(self, r):
        r = np.asarray(r, dtype=np.float64)
        sys = self.system
        if r.shape != (sys.order,):
            raise ValueError(f"residual has shape {r.shape}, expected ({sys.order},)")
        alpha = self.spec.alpha
        r1, r2 = r[: sys.n], r[sys.n :]
        kind = self.spec.kind
        if kind in ("ss", "rss"):
            t = r1 - sys.Bt.matvec(r2) / alpha
            z1 = self._schur_solve(t)
            z2 = (sys.C.matvec(z1) + r2) / alpha
            return np.concatenate([z1, z2])
        if kind == "aug":
            z2 = r2 / alpha
            z1 = self._schur_solve(r1 - sys.Bt.matvec(z2))
            return np.concatenate([z1, z2])
        # ppss
        w1 = self._stage1_solve(r1)
        w2 = r2 / alpha
        z1 = self._schur_solve(w1 - sys.Bt.matvec(w2) / alpha)
        z2 = (w2 + sys.C.matvec(z1)) / alpha
        return 2.0 * alpha * np.concatenate([z1, z2])

    __call__ = apply


class _ShiftedA:
    """x -> alpha x + A x, the first ppss stage."""

    def __init__(self, system, alpha):
        self.system = system
        self.alpha = float(alpha)

    @property
    def size(self):
        return self.system.n

    def __call__(self, x):
        return self.alpha * x + self.system.A.matvec(x)

    def toarray(self):
        if self.size > DESK_SCALE:
            raise ValueError(f"refusing to materialize an operator of order {self.size}")
        out = self.system.A.toarray()
        out[np.diag_indices_from(out)] += self.alpha
        return out


def _one_shot(kind, system, alpha, r, inner, rule):
    spec = PrecondSpec(kind, alpha, inner_policy=inner, rule=rule or StoppingRule())
    return Preconditioner(system, spec).apply(r)


def apply_ss(system, alpha, r, inner="auto", rule=None):
    """One shift-splitting apply: solves (alpha I + script-A) z = r."""
    return _one_shot("ss", system, alpha, r, inner, rule)


def apply_rss(system, alpha, r, inner="auto", rule=None):
    """One relaxed shift-splitting apply."""
    return _one_shot("rss", system, alpha, r, inner, rule)


def apply_ppss(system, alpha, r, inner="auto", rule=None):
    """One two-stage positive-definite/skew splitting apply."""
    return _one_shot("ppss", system, alpha, r, inner, rule)


def apply_aug(system, alpha, r, inner="auto", rule=None):
    """One augmentation (block upper triangular) apply."""
    return _one_shot("aug", system, alpha, r, inner, rule)

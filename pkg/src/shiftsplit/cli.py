"""Command line benchmark driver.

Builds a saddle point problem (generated lid-driven cavity discretization or
an external Matrix Market file), runs the requested preconditioned solver
configuration, and emits a result table in markdown or CSV. Optional outputs:
an eigenvalue CSV for small problems, a convergence or spectrum figure, and
the table written to a file instead of stdout.

Exit status is 0 as long as the experiment ran, even when a solver hit its
iteration cap (the table marks those rows). Configuration and I/O errors
return a nonzero status.
"""

import argparse
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .krylov import StoppingRule, fgmres, gmres
from .preconditioners import INNER_POLICIES, KINDS, Preconditioner, PrecondSpec
from .report import (
    TableRow,
    emit_table,
    render_convergence_figure,
    render_spectrum_figure,
)
from .saddle import (
    alpha_est,
    block_operator,
    build_stokes,
    rhs_all_ones,
    split_external,
)
from .sparse import MatrixMarketError, read_matrix_market
from .spectrum import export_spectrum_csv, preconditioned_spectrum, ss_containment_report

__all__ = [
    "ExperimentConfig",
    "ExternalProblem",
    "StokesProblem",
    "main",
    "run_experiment",
    "sweep_alpha",
]


@dataclass
class StokesProblem:
    """Generated two dimensional cavity flow problem of grid parameter s."""

    s: int
    mu: float = 1.0
    k: float = 2.0

    def build(self):
        return build_stokes(self.s, mu=self.mu, k=self.k)


@dataclass
class ExternalProblem:
    """Saddle point matrix read from a Matrix Market file."""

    path: str
    n: int
    m: int

    def build(self):
        mat = read_matrix_market(self.path)
        return split_external(mat, self.n, self.m)


@dataclass
class ExperimentConfig:
    problem: StokesProblem | ExternalProblem
    precond: str = "none"
    alpha: str | None = None
    alphas: tuple[float, ...] = ()
    inner_policy: str = "auto"
    rule: StoppingRule = field(default_factory=StoppingRule)


def _resolve_alpha(system, text):
    if text == "est":
        return alpha_est(system)
    value = float(text)
    if value <= 0.0:
        raise ValueError("alpha must be positive")
    return value


def _run_single(system, config, alpha):
    """Solve once and return a populated table row."""
    f = rhs_all_ones(system)
    op = block_operator(system)
    start = time.perf_counter()
    if config.precond == "none":
        report = gmres(op, f, restart=None, rule=config.rule)
    else:
        spec = PrecondSpec(
            kind=config.precond,
            alpha=alpha,
            inner_policy=config.inner_policy,
            rule=config.rule,
        )
        pre = Preconditioner(system, spec)
        report = fgmres(op, f, precond_apply=pre, rule=config.rule)
    elapsed = time.perf_counter() - start
    residual = f - op(report.final_solution)
    final_rk = float(np.linalg.norm(residual) / np.linalg.norm(f))
    row = TableRow(
        label=config.precond,
        alpha_used=float("nan") if alpha is None else alpha,
        iters=report.iterations,
        cpu_seconds=elapsed,
        final_rk=final_rk,
        converged=report.converged,
        history=list(report.relative_residuals),
    )
    return row


def run_experiment(config):
    """Run the configured experiment, returning (rows, system)."""
    system = config.problem.build()
    if config.alphas:
        return sweep_alpha(system, config), system
    alpha = None
    if config.precond != "none":
        if config.alpha is None:
            raise ValueError("--alpha is required when a preconditioner is selected")
        alpha = _resolve_alpha(system, config.alpha)
    return [_run_single(system, config, alpha)], system


def sweep_alpha(system, config):
    """One row per sweep value, cheapest converged run flagged."""
    if config.precond == "none":
        raise ValueError("--alpha-sweep needs a preconditioner")
    rows = [_run_single(system, config, alpha) for alpha in config.alphas]
    converged = [r for r in rows if r.converged]
    if converged:
        min(converged, key=lambda r: r.cpu_seconds).min_cpu = True
    return rows


def _run_spectrum(system, config, path):
    if config.precond == "none":
        report = preconditioned_spectrum(system, None)
    else:
        alpha = _resolve_alpha(system, config.alpha)
        if config.precond == "ss":
            report = ss_containment_report(system, alpha)
        else:
            spec = PrecondSpec(kind=config.precond, alpha=alpha)
            report = preconditioned_spectrum(system, spec)
    export_spectrum_csv(report, path)
    return report


def _parse_sweep(text):
    values = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        value = float(piece)
        if value <= 0.0:
            raise ValueError("sweep values must be positive")
        values.append(value)
    if not values:
        raise ValueError("--alpha-sweep needs at least one value")
    return tuple(values)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="shiftsplit",
        description="Benchmark shift-splitting preconditioners on saddle point systems.",
    )
    parser.add_argument("--problem", choices=("stokes", "external"), default="stokes")
    parser.add_argument("--s", type=int, default=16, help="cavity grid parameter")
    parser.add_argument("--mu", type=float, default=1.0, help="viscosity")
    parser.add_argument("--k", type=float, default=2.0, help="lower coupling scale")
    parser.add_argument("--matrix", help="Matrix Market file for --problem external")
    parser.add_argument("--n", type=int, help="leading block order of the external matrix")
    parser.add_argument("--m", type=int, help="constraint count of the external matrix")
    parser.add_argument("--precond", choices=("none",) + KINDS, default="none")
    parser.add_argument("--alpha", help="shift value, or 'est' for the estimated value")
    parser.add_argument("--alpha-sweep", help="comma separated shift values")
    parser.add_argument("--tol", type=float, default=1e-7, help="outer relative residual target")
    parser.add_argument("--maxit", type=int, default=1000, help="outer iteration cap")
    parser.add_argument(
        "--inner-reduction",
        type=float,
        default=1e2,
        help="required inner residual reduction factor",
    )
    parser.add_argument("--inner-maxit", type=int, default=100, help="inner iteration cap")
    parser.add_argument("--inner", choices=INNER_POLICIES, default="auto")
    parser.add_argument("--spectrum-out", help="write eigenvalues to this CSV and skip solving")
    parser.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    parser.add_argument("--out", help="write the table to this file instead of stdout")
    parser.add_argument("--figure-out", help="render a figure (PNG or PDF) to this path")
    return parser


def _config_from_args(args):
    if args.problem == "stokes":
        if args.s < 1:
            raise ValueError("--s must be at least 1")
        problem = StokesProblem(s=args.s, mu=args.mu, k=args.k)
    else:
        if not args.matrix:
            raise ValueError("--problem external needs --matrix")
        if args.n is None or args.m is None:
            raise ValueError("--problem external needs --n and --m")
        problem = ExternalProblem(path=args.matrix, n=args.n, m=args.m)
    if args.inner_reduction <= 1.0:
        raise ValueError("--inner-reduction must exceed 1")
    rule = StoppingRule(
        rel_tol=args.tol,
        max_outer=args.maxit,
        inner_reduction=1.0 / args.inner_reduction,
        max_inner=args.inner_maxit,
    )
    alphas = _parse_sweep(args.alpha_sweep) if args.alpha_sweep else ()
    return ExperimentConfig(
        problem=problem,
        precond=args.precond,
        alpha=args.alpha,
        alphas=alphas,
        inner_policy=args.inner,
        rule=rule,
    )


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.spectrum_out:
            if config.alphas:
                raise ValueError("--spectrum-out cannot be combined with --alpha-sweep")
            if config.precond != "none" and config.alpha is None:
                raise ValueError("--alpha is required when a preconditioner is selected")
            system = config.problem.build()
            report = _run_spectrum(system, config, args.spectrum_out)
            if args.figure_out:
                render_spectrum_figure(report, args.figure_out)
            return 0
        rows, _ = run_experiment(config)
        table = emit_table(rows, fmt=args.format)
        if args.out:
            with open(args.out, "w", encoding="ascii") as handle:
                handle.write(table)
        else:
            sys.stdout.write(table)
        if args.figure_out:
            render_convergence_figure(rows, args.figure_out)
        return 0
    except (ValueError, OSError, MatrixMarketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

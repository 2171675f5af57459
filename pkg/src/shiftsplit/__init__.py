"""Shift-splitting preconditioners for asymmetric saddle point systems.

The package bundles a compressed sparse row matrix core with Matrix Market
I/O, dense helper kernels, saddle point problem builders, Krylov solvers,
four block preconditioners, the stationary shift-splitting iteration with its
convergence analysis, spectrum verification utilities, and a benchmark CLI.
"""

from .dense import (
    NormEstimate,
    eigvals,
    lu_solve,
    norm2_est,
    roots_in_unit_disk_complex,
    roots_in_unit_disk_real,
)
from .krylov import SolveReport, StoppingRule, cg, fgmres, gmres
from .preconditioners import (
    INNER_POLICIES,
    KINDS,
    Preconditioner,
    PrecondSpec,
    SchurOperator,
    apply_aug,
    apply_ppss,
    apply_rss,
    apply_ss,
    select_inner,
)
from .report import TableRow, emit_table, format_sci
from .saddle import (
    DESK_SCALE,
    AssumptionReport,
    SaddleSystem,
    alpha_est,
    assemble_matrix,
    block_apply,
    block_operator,
    build_stokes,
    check_assumptions,
    coupling_norm,
    min_a_eigenvalue,
    rhs_all_ones,
    split_external,
)
from .sparse import (
    MatrixMarketError,
    SparseMatrix,
    add,
    build_tridiag,
    identity,
    kron,
    nnz,
    read_matrix_market,
    scale,
    spmv,
    transpose,
    vstack,
    write_matrix_market,
)
from .spectrum import (
    Containment,
    RssBlockCheck,
    SpectrumReport,
    export_spectrum_csv,
    half_disk_containment,
    multisets_match,
    preconditioned_spectrum,
    read_spectrum_csv,
    rss_block_structure,
    ss_containment_report,
)
from .stationary import (
    EigenRow,
    SSConvergenceReport,
    analyze_convergence,
    eigen_quadratic_residual,
    iteration_matrix,
    no_eigenvalue_near_unit,
    ss_solve,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport",
    "Containment",
    "DESK_SCALE",
    "EigenRow",
    "INNER_POLICIES",
    "KINDS",
    "MatrixMarketError",
    "NormEstimate",
    "Preconditioner",
    "PrecondSpec",
    "RssBlockCheck",
    "SSConvergenceReport",
    "SaddleSystem",
    "SchurOperator",
    "SolveReport",
    "SparseMatrix",
    "SpectrumReport",
    "StoppingRule",
    "TableRow",
    "add",
    "alpha_est",
    "analyze_convergence",
    "apply_aug",
    "apply_ppss",
    "apply_rss",
    "apply_ss",
    "assemble_matrix",
    "block_apply",
    "block_operator",
    "build_stokes",
    "build_tridiag",
    "cg",
    "check_assumptions",
    "coupling_norm",
    "eigen_quadratic_residual",
    "eigvals",
    "emit_table",
    "export_spectrum_csv",
    "fgmres",
    "format_sci",
    "gmres",
    "half_disk_containment",
    "identity",
    "iteration_matrix",
    "kron",
    "lu_solve",
    "min_a_eigenvalue",
    "multisets_match",
    "nnz",
    "no_eigenvalue_near_unit",
    "norm2_est",
    "preconditioned_spectrum",
    "read_matrix_market",
    "read_spectrum_csv",
    "rhs_all_ones",
    "roots_in_unit_disk_complex",
    "roots_in_unit_disk_real",
    "rss_block_structure",
    "scale",
    "select_inner",
    "spmv",
    "split_external",
    "ss_containment_report",
    "ss_solve",
    "transpose",
    "vstack",
    "write_matrix_market",
]

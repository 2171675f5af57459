"""End-to-end acceptance gate.

Each test covers one numbered criterion and prints a single
"[criterion NN] PASS/FAIL ..." line before asserting, so running this
file with -s doubles as the acceptance report.
"""

import os
import subprocess
import sys
from pathlib import Path
from time import perf_counter

import numpy as np
import pytest

from shiftsplit import (
    PrecondSpec,
    Preconditioner,
    StoppingRule,
    alpha_est,
    apply_aug,
    apply_ppss,
    apply_rss,
    apply_ss,
    block_operator,
    build_stokes,
    fgmres,
    gmres,
    iteration_matrix,
    multisets_match,
    preconditioned_spectrum,
    read_matrix_market,
    rhs_all_ones,
    rss_block_structure,
    split_external,
    ss_containment_report,
    ss_solve,
)
from shiftsplit.dense import eigvals
from shiftsplit.stationary import analyze_convergence, no_eigenvalue_near_unit

REPO_ROOT = Path(__file__).resolve().parents[1]

pytestmark = pytest.mark.acceptance


def verdict(number, ok, description):
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {number:02d}] {status} {description}")
    assert ok, f"criterion {number:02d}: {description}"


def outer_iterations(system, kind, alpha, rel_tol=1e-7):
    rule = StoppingRule(rel_tol=rel_tol)
    op = block_operator(system)
    f = rhs_all_ones(system)
    if kind == "none":
        report = gmres(op, f, rule=rule)
    else:
        pre = Preconditioner(system, PrecondSpec(kind, alpha))
        report = fgmres(op, f, precond_apply=pre.apply, rule=rule)
    return report.iterations, report.converged


def test_criterion_01_grid_structure():
    expected = {
        16: (512, 256, 2432, 992),
        32: (2048, 1024, 9984, 4032),
        64: (8192, 4096, 40448, 16256),
    }
    start = perf_counter()
    mismatches = []
    for s, (n, m, nnz_a, nnz_coupling) in expected.items():
        system = build_stokes(s)
        got = (system.n, system.m, system.A.nnz, system.B.nnz, system.C.nnz)
        if got != (n, m, nnz_a, nnz_coupling, nnz_coupling):
            mismatches.append((s, got))
    elapsed = perf_counter() - start
    ok = not mismatches and elapsed < 1.0
    verdict(
        1,
        ok,
        f"grid assembly sizes and sparsity counts exact for s in (16, 32, 64)"
        f" ({elapsed:.2f}s < 1s){'; mismatches: ' + repr(mismatches) if mismatches else ''}",
    )


def test_criterion_02_shift_estimate():
    start = perf_counter()
    est16 = alpha_est(build_stokes(16))
    est32 = alpha_est(build_stokes(32))
    est_visc = alpha_est(build_stokes(16, mu=0.1))
    elapsed = perf_counter() - start
    ok = (
        abs(est16 - 2.03) <= 0.05
        and abs(est32 - 2.01) <= 0.05
        and abs(est_visc - 18.34) <= 0.15 * 18.34
        and elapsed < 5.0
    )
    verdict(
        2,
        ok,
        f"estimated shift {est16:.3f} (s=16), {est32:.3f} (s=32),"
        f" {est_visc:.2f} (s=16, mu=0.1) inside windows ({elapsed:.2f}s < 5s)",
    )


def test_criterion_03_unpreconditioned_baseline():
    start = perf_counter()
    iters, converged = outer_iterations(build_stokes(16), "none", None)
    elapsed = perf_counter() - start
    ok = converged and abs(iters - 133) <= 13.3 and elapsed < 10.0
    verdict(
        3,
        ok,
        f"unrestarted solver on the s=16 system took {iters} iterations"
        f" (target 133 +-10%) ({elapsed:.2f}s < 10s)",
    )


def test_criterion_04_preconditioned_counts():
    runs = [
        ("ss", build_stokes(16), 0.10, 16),
        ("rss", build_stokes(16), 0.20, 16),
        ("ss", build_stokes(16, mu=0.1), 0.25, 16),
        ("ss", build_stokes(16), None, 24),
    ]
    failures = []
    for kind, system, alpha, bound in runs:
        if alpha is None:
            alpha = alpha_est(system)
        start = perf_counter()
        iters, converged = outer_iterations(system, kind, alpha)
        elapsed = perf_counter() - start
        if not (converged and iters <= bound and elapsed < 10.0):
            failures.append((kind, alpha, iters, converged, round(elapsed, 2)))
    verdict(
        4,
        not failures,
        "preconditioned outer counts within bounds (each run < 10s)"
        + (f"; failures: {failures!r}" if failures else ""),
    )


def test_criterion_05_iteration_count_ordering():
    tuned = {
        16: {"ss": 0.10, "rss": 0.20, "ppss": 98.50, "aug": 0.11},
        32: {"ss": 0.20, "rss": 0.34, "ppss": 100.60, "aug": 0.10},
    }
    start = perf_counter()
    problems = []
    for s, alphas in tuned.items():
        system = build_stokes(s)
        counts = {"none": outer_iterations(system, "none", None)[0]}
        for kind, alpha in alphas.items():
            iters, converged = outer_iterations(system, kind, alpha)
            counts[kind] = iters if converged else 10**9
        ordered = (
            abs(counts["ss"] - counts["rss"]) <= 2
            and max(counts["ss"], counts["rss"]) < counts["aug"]
            and counts["aug"] < counts["ppss"]
            and counts["ppss"] < counts["none"]
        )
        if not ordered:
            problems.append((s, counts))
    elapsed = perf_counter() - start
    ok = not problems and elapsed < 60.0
    verdict(
        5,
        ok,
        f"outer counts ranked ss ~ rss < aug < ppss < none at s=16 and s=32"
        f" ({elapsed:.2f}s < 60s){'; got ' + repr(problems) if problems else ''}",
    )


def test_criterion_06_stationary_convergence():
    system = build_stokes(8)
    start = perf_counter()
    radii = {}
    near_unit_ok = True
    for alpha in (0.1, 0.5, 1.0, 2.0, 10.0):
        report = analyze_convergence(system, alpha)
        radii[alpha] = report.spectral_radius
        near_unit_ok = near_unit_ok and no_eigenvalue_near_unit(report)
    rule = StoppingRule(rel_tol=1e-7, max_outer=6000)
    solve = ss_solve(system, rhs_all_ones(system), 1.0, rule=rule, inner="direct")
    elapsed = perf_counter() - start
    ok = (
        all(r < 1.0 for r in radii.values())
        and near_unit_ok
        and solve.converged
        and solve.relative_residuals[-1] <= 1e-7
        and elapsed < 30.0
    )
    verdict(
        6,
        ok,
        f"stationary iteration contracts (max radius {max(radii.values()):.6f},"
        f" solve in {solve.iterations} sweeps, no eigenvalue near +-1)"
        f" ({elapsed:.2f}s < 30s)",
    )


def test_criterion_07_half_disk_and_eigenvalue_map():
    system = build_stokes(8)
    start = perf_counter()
    failures = []
    for alpha in (0.25, 1.0, 4.0):
        report = ss_containment_report(system, alpha)
        lam = np.asarray(report.eigenvalues)
        inside = (
            np.all(np.abs(lam - 0.5) <= 0.5 + 1e-8)
            and np.all(lam.real > -1e-8)
            and np.all(np.abs(lam) < 1 + 1e-8)
        )
        mu = eigvals(iteration_matrix(system, alpha))
        mapped = multisets_match(2.0 * lam, 1.0 - np.asarray(mu), 1e-6)
        if not (inside and mapped):
            failures.append(alpha)
    elapsed = perf_counter() - start
    ok = not failures and elapsed < 30.0
    verdict(
        7,
        ok,
        f"preconditioned spectrum stays in the closed half disk and matches the"
        f" stationary spectrum under 2*lambda = 1 - mu ({elapsed:.2f}s < 30s)"
        + (f"; failing alphas {failures!r}" if failures else ""),
    )


def test_criterion_08_relaxed_block_structure():
    start = perf_counter()
    big = rss_block_structure(build_stokes(8), 1.0, tol=1e-10)
    small_system = build_stokes(4)
    small = rss_block_structure(small_system, 1.0)
    union = np.concatenate(
        [np.ones(small_system.n), np.asarray(small.secondary_eigenvalues)]
    )
    full = preconditioned_spectrum(small_system, PrecondSpec("rss", 1.0)).eigenvalues
    union_ok = multisets_match(union, full, 1e-6)
    elapsed = perf_counter() - start
    ok = big.identity_block_ok and union_ok and elapsed < 10.0
    verdict(
        8,
        ok,
        f"relaxed preconditioner has an identity velocity block"
        f" (worst deviation {big.worst_deviation:.2e}) and its spectrum is"
        f" ones plus the reduced block ({elapsed:.2f}s < 10s)",
    )


def test_criterion_09_hand_worked_oracles(toy):
    start = perf_counter()
    checks = []
    m_matrix = iteration_matrix(toy, 1.0)
    checks.append(
        np.allclose(m_matrix, [[-0.5, -0.5], [0.5, 0.5]], rtol=0.0, atol=1e-12)
    )
    r = np.array([4.0, 1.0])
    applies = {
        "ss": (apply_ss, (0.75, 1.75)),
        "rss": (apply_rss, (1.0, 2.0)),
        "ppss": (apply_ppss, (1.0 / 3.0, 7.0 / 3.0)),
        "aug": (apply_aug, (1.0, 1.0)),
    }
    for func, expected in applies.values():
        got = func(toy, 1.0, r, inner="direct")
        checks.append(np.allclose(got, expected, rtol=0.0, atol=1e-12))
    ss_spectrum = ss_containment_report(toy, 1.0).eigenvalues
    checks.append(multisets_match(ss_spectrum, [0.5, 0.5], 1e-12))
    rss_spectrum = preconditioned_spectrum(toy, PrecondSpec("rss", 1.0)).eigenvalues
    checks.append(multisets_match(rss_spectrum, [1.0, 1.0 / 3.0], 1e-12))
    checks.append(abs(alpha_est(toy) - 0.5) <= 1e-12)
    elapsed = perf_counter() - start
    ok = all(checks) and elapsed < 1.0
    verdict(
        9,
        ok,
        f"1x1-block oracles reproduce to 1e-12"
        f" (checks {['ok' if c else 'BAD' for c in checks]}) ({elapsed:.2f}s < 1s)",
    )


def test_criterion_10_property_suites():
    start = perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-m", "property", "-q", "-p", "no:cacheprovider"],
        cwd=REPO_ROOT,
        capture_output=True,
        text=True,
        timeout=300,
    )
    elapsed = perf_counter() - start
    ok = proc.returncode == 0 and elapsed < 120.0
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else "no output"
    verdict(10, ok, f"randomized invariant suites: {tail} ({elapsed:.2f}s < 120s)")


ILL_STOKES_PATH = Path(
    os.environ.get("ILL_STOKES_MTX", REPO_ROOT / "data" / "Ill_Stokes.mtx")
)


@pytest.mark.skipif(
    not ILL_STOKES_PATH.exists(),
    reason="external matrix not present; place it at data/Ill_Stokes.mtx"
    " or point ILL_STOKES_MTX at it",
)
def test_external_flow_matrix_alpha_trend():
    matrix = read_matrix_market(ILL_STOKES_PATH)
    system = split_external(matrix, 15672, 5224)
    small_alpha_iters, _ = outer_iterations(system, "ss", 1e-4)
    large_alpha_iters, _ = outer_iterations(system, "ss", 0.1)
    assert small_alpha_iters < large_alpha_iters

"""Eigenvalue computations for the preconditioned operators.

Dense, desk-scale verification paths: spectra of P^{-1} script-A for each
preconditioner, the half-disk containment of the shift-splitting
preconditioned spectrum, and the block structure of the relaxed variant
(eigenvalue one with multiplicity n plus an m x m secondary spectrum).
"""

import os
from dataclasses import dataclass, replace

import numpy as np

from .dense import eigvals
from .preconditioners import Preconditioner, PrecondSpec
from .saddle import DESK_SCALE, assemble_matrix

__all__ = [
    "Containment",
    "RssBlockCheck",
    "SpectrumReport",
    "export_spectrum_csv",
    "half_disk_containment",
    "multisets_match",
    "preconditioned_spectrum",
    "read_spectrum_csv",
    "rss_block_structure",
    "ss_containment_report",
]


@dataclass(frozen=True)
class Containment:
    center: complex
    radius: float
    all_inside: bool


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of one operator, labeled for export."""

    label: str
    alpha: float | None
    eigenvalues: np.ndarray
    containment: Containment | None = None


def _gate(system):
    if system.order > DESK_SCALE:
        raise ValueError(f"dense spectrum refused beyond order {DESK_SCALE}")


def preconditioned_spectrum(system, spec=None):
    """Spectrum of P^{-1} script-A (or of script-A itself when spec is None).

    The preconditioned operator is assembled column by column with direct
    (dense LU) inner solves, then passed to the dense eigensolver.
    """
    _gate(system)
    a_dense = assemble_matrix(system).toarray()
    if spec is None:
        return SpectrumReport("unpreconditioned", None, eigvals(a_dense))
    pre = Preconditioner(system, replace(spec, inner_policy="direct"))
    order = system.order
    mat = np.empty((order, order))
    for j in range(order):
        mat[:, j] = pre.apply(a_dense[:, j])
    return SpectrumReport(spec.kind, float(spec.alpha), eigvals(mat))


def half_disk_containment(values, tol=1e-8):
    """True when every eigenvalue has positive real part, modulus below one
    and lies in the closed disk of radius 1/2 centered at 1/2."""
    values = np.asarray(values, dtype=np.complex128)
    return bool(
        np.all(values.real > -tol)
        and np.all(np.abs(values) < 1.0 + tol)
        and np.all(np.abs(values - 0.5) <= 0.5 + tol)
    )


def ss_containment_report(system, alpha, tol=1e-8):
    """Spectrum of the shift-splitting preconditioned matrix with its
    half-disk containment verdict."""
    report = preconditioned_spectrum(system, PrecondSpec("ss", alpha))
    inside = half_disk_containment(report.eigenvalues, tol=tol)
    return replace(
        report, containment=Containment(complex(0.5, 0.0), 0.5, inside)
    )


@dataclass(frozen=True)
class RssBlockCheck:
    """Structure check of the relaxed-variant preconditioned operator."""

    identity_block_ok: bool
    worst_deviation: float
    secondary_eigenvalues: np.ndarray


def rss_block_structure(system, alpha, tol=1e-10):
    """Verify P_rss^{-1} script-A maps the first n basis vectors to
    themselves and compute the m secondary eigenvalues
    eig((1/alpha) C (A + (1/alpha) B^T C)^{-1} B^T)."""
    _gate(system)
    n, m = system.n, system.m
    pre = Preconditioner(system, PrecondSpec("rss", alpha, inner_policy="direct"))
    a_dense = assemble_matrix(system).toarray()
    worst = 0.0
    for j in range(n):
        image = pre.apply(a_dense[:, j])
        image[j] -= 1.0
        worst = max(worst, float(np.max(np.abs(image))))
    bt_dense = system.Bt.toarray()
    c_dense = system.C.toarray()
    schur = system.A.toarray() + bt_dense @ c_dense / alpha
    u = np.linalg.solve(schur, bt_dense)
    secondary = eigvals(c_dense @ u / alpha)
    return RssBlockCheck(worst <= tol, worst, secondary)


def multisets_match(left, right, tol):
    """Greedy tolerance matching of two complex multisets."""
    left = np.asarray(left, dtype=np.complex128).ravel()
    right = np.asarray(right, dtype=np.complex128).ravel().copy()
    if left.size != right.size:
        return False
    used = np.zeros(right.size, dtype=bool)
    order = np.lexsort((left.imag, left.real))
    for idx in order:
        dist = np.abs(right - left[idx])
        dist[used] = np.inf
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return False
        used[j] = True
    return True


def export_spectrum_csv(report, path):
    """Write `re,im` lines sorted by (re, im), after a `# label,alpha` line."""
    values = np.asarray(report.eigenvalues, dtype=np.complex128)
    order = np.lexsort((values.imag, values.real))
    alpha_text = "none" if report.alpha is None else f"{report.alpha:.17g}"
    lines = [f"# {report.label},{alpha_text}"]
    lines.extend(
        f"{values[i].real:.17g},{values[i].imag:.17g}" for i in order
    )
    with open(os.fspath(path), "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def read_spectrum_csv(path):
    """Inverse of export_spectrum_csv."""
    with open(os.fspath(path), "r", encoding="utf-8") as handle:
        lines = [ln.strip() for ln in handle if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing '# label,alpha' header line")
    label, _, alpha_text = lines[0][1:].strip().rpartition(",")
    alpha = None if alpha_text == "none" else float(alpha_text)
    values = np.empty(len(lines) - 1, dtype=np.complex128)
    for idx, line in enumerate(lines[1:]):
        re_text, _, im_text = line.partition(",")
        values[idx] = complex(float(re_text), float(im_text))
    return SpectrumReport(label, alpha, values)

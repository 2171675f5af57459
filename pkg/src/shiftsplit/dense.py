"""Dense desk-scale kernels.

Pivoted linear solves, nonsymmetric eigenvalues (balanced Hessenberg
reduction plus implicitly shifted QR, via LAPACK), a power-iteration
2-norm estimator, and the unit-disk location tests for quadratic roots.
"""

import math
from typing import NamedTuple

import numpy as np

__all__ = [
    "ComplexList",
    "DenseMatrix",
    "NormEstimate",
    "eigvals",
    "lu_solve",
    "norm2_est",
    "roots_in_unit_disk_complex",
    "roots_in_unit_disk_real",
]

DenseMatrix = np.ndarray
ComplexList = np.ndarray


def lu_solve(a, b):
    """Solve A x = b by LU with partial pivoting.

    Raises numpy.linalg.LinAlgError when a zero pivot survives pivoting
    (singular matrix).
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    b = np.asarray(b)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"right-hand side length {b.shape[0]} does not match order {a.shape[0]}")
    return np.linalg.solve(a, b)


def eigvals(a):
    """All eigenvalues of a square real matrix as a complex array.

    The matrix is balanced, reduced to Hessenberg form and processed by
    implicitly shifted QR; failure to converge raises LinAlgError. Orders
    one and two take the closed form instead, which keeps exactly
    representable double eigenvalues exact where the QR sweep would smear
    them by about the square root of machine precision.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if a.shape[0] == 1:
        return np.asarray([a[0, 0]], dtype=np.complex128)
    if a.shape[0] == 2 and not np.iscomplexobj(a):
        return _eigvals_2x2(float(a[0, 0]), float(a[0, 1]), float(a[1, 0]), float(a[1, 1]))
    return np.asarray(np.linalg.eigvals(a), dtype=np.complex128)


def _eigvals_2x2(a, b, c, d):
    # standardized 2x2 real Schur form, triangular cases passed through
    if b == 0.0 or c == 0.0:
        return np.asarray([a, d], dtype=np.complex128)
    mean = 0.5 * (a + d)
    p = 0.5 * (a - d)
    z = p * p + b * c
    if z >= 0.0:
        root = math.sqrt(z)
        return np.asarray([mean + root, mean - root], dtype=np.complex128)
    root = math.sqrt(-z)
    return np.asarray([complex(mean, root), complex(mean, -root)], dtype=np.complex128)


class NormEstimate(NamedTuple):
    value: float
    converged: bool
    iterations: int


def norm2_est(apply, size, apply_t=None, tol=1e-4, maxit=1000, seed=0):
    """Estimate the spectral norm of an operator by power iteration.

    Iterates x <- op^T(op(x)) on the normal operator and reports
    sqrt of its dominant eigenvalue estimate. Stops when the relative
    change between successive estimates drops to tol.

    Parameters
    ----------
    apply : callable mapping a vector of length `size` forward
    size : input dimension of the operator
    apply_t : transpose apply; defaults to `apply` (symmetric operator)
    tol : relative-change stopping tolerance
    maxit : iteration cap; on hitting it the best estimate is returned
        with converged=False
    seed : seed for the deterministic random start vector
    """
    if size < 1:
        raise ValueError("operator dimension must be positive")
    back = apply_t if apply_t is not None else apply
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(size)
    xn = np.linalg.norm(x)
    if xn == 0.0:
        x = np.ones(size)
        xn = np.sqrt(float(size))
    x = x / xn
    estimate = 0.0
    for it in range(1, maxit + 1):
        y = apply(x)
        z = back(y)
        zn = float(np.linalg.norm(z))
        if zn == 0.0:
            return NormEstimate(0.0, True, it)
        new = float(np.sqrt(zn))
        if it > 1 and abs(new - estimate) <= tol * new:
            return NormEstimate(new, True, it)
        estimate = new
        x = z / zn
    return NormEstimate(estimate, False, maxit)


def roots_in_unit_disk_real(a, b):
    """True iff both roots of x^2 - a x + b (real a, b) have modulus < 1.

    Criterion: |b| < 1 and |a| < 1 + b.
    """
    return abs(b) < 1.0 and abs(a) < 1.0 + b


def roots_in_unit_disk_complex(phi, psi):
    """True iff both roots of x^2 - phi x + psi (complex) have modulus < 1.

    Criterion: |psi| < 1 and |phi - conj(phi) psi| + |psi|^2 < 1.
    """
    phi = complex(phi)
    psi = complex(psi)
    return abs(psi) < 1.0 and abs(phi - phi.conjugate() * psi) + abs(psi) ** 2 < 1.0

"""Compressed-row sparse matrices and the kernel set used by the solvers.

Matrices are immutable once built: column indices are sorted and duplicate
free within each row, and exact zeros are never stored. All construction
funnels through coordinate triplets, which sort, sum duplicates and drop
zeros, so nnz always counts true structural nonzeros.
"""

import os

import numpy as np

__all__ = [
    "MatrixMarketError",
    "SparseMatrix",
    "Vector",
    "add",
    "build_tridiag",
    "identity",
    "kron",
    "nnz",
    "read_matrix_market",
    "scale",
    "spmv",
    "transpose",
    "vstack",
    "write_matrix_market",
]

# One dimensional float64 numpy array.
Vector = np.ndarray

_INDEX_LIMIT = np.iinfo(np.int64).max // 4


class MatrixMarketError(ValueError):
    """Malformed Matrix Market input; messages carry the file name and line."""


class SparseMatrix:
    """Real matrix in compressed sparse row form.

    Storage invariants, enforced at construction:
      * row_offsets has length rows + 1, starts at 0, is nondecreasing and
        ends at nnz;
      * within each row the column indices are strictly increasing;
      * no stored value is exactly zero.

    Instances are immutable; every operation returns a new matrix.
    """

    __slots__ = ("rows", "cols", "row_offsets", "col_indices", "values", "_entry_rows")

    def __init__(self, rows, cols, row_offsets, col_indices, values):
        rows = int(rows)
        cols = int(cols)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        row_offsets = np.asarray(row_offsets, dtype=np.int64)
        col_indices = np.asarray(col_indices, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if row_offsets.shape != (rows + 1,):
            raise ValueError("row_offsets must have length rows + 1")
        if row_offsets[0] != 0 or row_offsets[-1] != values.size:
            raise ValueError("row_offsets must start at 0 and end at nnz")
        if col_indices.shape != values.shape or col_indices.ndim != 1:
            raise ValueError("col_indices and values must be 1-D and equally long")
        counts = np.diff(row_offsets)
        if np.any(counts < 0):
            raise ValueError("row_offsets must be nondecreasing")
        if values.size:
            if col_indices.min() < 0 or col_indices.max() >= cols:
                raise ValueError("column index out of range")
            # strict increase inside each row; drops in the diff are only
            # allowed where a new row starts
            starts = np.zeros(values.size, dtype=bool)
            inner = row_offsets[1:-1]
            starts[inner[inner < values.size]] = True
            bad = (np.diff(col_indices) <= 0) & ~starts[1:]
            if np.any(bad):
                raise ValueError("column indices must be strictly increasing within a row")
        self.rows = rows
        self.cols = cols
        self.row_offsets = row_offsets
        self.col_indices = col_indices
        self.values = values
        self._entry_rows = np.repeat(np.arange(rows, dtype=np.int64), counts)
        for arr in (self.row_offsets, self.col_indices, self.values, self._entry_rows):
            arr.setflags(write=False)

    @classmethod
    def from_coo(cls, rows, cols, row_idx, col_idx, vals):
        """Build from coordinate triplets: sorts, sums duplicates, drops zeros."""
        i = np.asarray(row_idx, dtype=np.int64).ravel()
        j = np.asarray(col_idx, dtype=np.int64).ravel()
        v = np.asarray(vals, dtype=np.float64).ravel()
        if not (i.size == j.size == v.size):
            raise ValueError("coordinate arrays must have equal length")
        if i.size:
            if i.min() < 0 or i.max() >= rows or j.min() < 0 or j.max() >= cols:
                raise ValueError("coordinate index out of range")
            order = np.lexsort((j, i))
            i, j, v = i[order], j[order], v[order]
            fresh = np.empty(i.size, dtype=bool)
            fresh[0] = True
            fresh[1:] = (i[1:] != i[:-1]) | (j[1:] != j[:-1])
            group = np.cumsum(fresh) - 1
            i = i[fresh]
            j = j[fresh]
            v = np.bincount(group, weights=v)
            keep = v != 0.0
            i, j, v = i[keep], j[keep], v[keep]
        offsets = np.zeros(int(rows) + 1, dtype=np.int64)
        if i.size:
            offsets[1:] = np.cumsum(np.bincount(i, minlength=rows))
        return cls(rows, cols, offsets, j, v)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return int(self.values.size)

    def matvec(self, x):
        """Product A @ x.

        Row sums accumulate left to right in storage order (np.bincount walks
        the entries sequentially), so results are deterministic.
        """
        x = np.asarray(x)
        if x.shape != (self.cols,):
            raise ValueError(f"operand has shape {x.shape}, expected ({self.cols},)")
        if np.iscomplexobj(x):
            return self.matvec(x.real) + 1j * self.matvec(x.imag)
        x = np.asarray(x, dtype=np.float64)
        prod = self.values * x[self.col_indices]
        return np.bincount(self._entry_rows, weights=prod, minlength=self.rows)

    def toarray(self):
        out = np.zeros((self.rows, self.cols))
        out[self._entry_rows, self.col_indices] = self.values
        return out

    def tocoo(self):
        return self._entry_rows.copy(), self.col_indices.copy(), self.values.copy()

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.row_offsets, other.row_offsets)
            and np.array_equal(self.col_indices, other.col_indices)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def spmv(a, x):
    """Sparse matrix-vector product, y = A @ x."""
    return a.matvec(x)


def nnz(a):
    """Number of stored (structural) nonzeros."""
    return a.nnz


def build_tridiag(n, sub, diag, sup, scale=1.0):
    """Tridiagonal matrix scale * tridiag(sub, diag, sup) of order n.

    Zero coefficients produce no stored entries, so e.g. a zero
    superdiagonal does not inflate nnz.
    """
    n = int(n)
    if n < 1:
        raise ValueError("tridiagonal order must be at least 1")
    idx = np.arange(n, dtype=np.int64)
    i = np.concatenate([idx, idx[1:], idx[:-1]])
    j = np.concatenate([idx, idx[:-1], idx[1:]])
    v = np.concatenate(
        [
            np.full(n, float(diag)),
            np.full(n - 1, float(sub)),
            np.full(n - 1, float(sup)),
        ]
    )
    return SparseMatrix.from_coo(n, n, i, j, v * float(scale))


def identity(n):
    """Identity matrix of order n."""
    n = int(n)
    if n < 0:
        raise ValueError("identity order must be nonnegative")
    idx = np.arange(n, dtype=np.int64)
    return SparseMatrix(n, n, np.arange(n + 1, dtype=np.int64), idx, np.ones(n))


def transpose(a):
    """Transpose; entries are re-sorted into row-major order of the result."""
    order = np.argsort(a.col_indices, kind="stable")
    rows_t, _, _ = a.tocoo()
    offsets = np.zeros(a.cols + 1, dtype=np.int64)
    if a.nnz:
        offsets[1:] = np.cumsum(np.bincount(a.col_indices, minlength=a.cols))
    return SparseMatrix(a.cols, a.rows, offsets, rows_t[order], a.values[order])


def add(a, b, beta=1.0):
    """Linear combination A + beta * B; cancellation drops entries."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    ia, ja, va = a.tocoo()
    ib, jb, vb = b.tocoo()
    return SparseMatrix.from_coo(
        a.rows,
        a.cols,
        np.concatenate([ia, ib]),
        np.concatenate([ja, jb]),
        np.concatenate([va, float(beta) * vb]),
    )


def scale(a, c):
    """Scalar multiple c * A."""
    i, j, v = a.tocoo()
    return SparseMatrix.from_coo(a.rows, a.cols, i, j, float(c) * v)


def vstack(a, b):
    """Stack two matrices with equal column counts vertically."""
    if a.cols != b.cols:
        raise ValueError(f"column mismatch: {a.cols} vs {b.cols}")
    offsets = np.concatenate([a.row_offsets, a.row_offsets[-1] + b.row_offsets[1:]])
    return SparseMatrix(
        a.rows + b.rows,
        a.cols,
        offsets,
        np.concatenate([a.col_indices, b.col_indices]),
        np.concatenate([a.values, b.values]),
    )


def kron(a, b):
    """Kronecker product A (x) B."""
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    if rows > _INDEX_LIMIT or cols > _INDEX_LIMIT:
        raise ValueError("kron dimensions overflow the index range")
    ia, ja, va = a.tocoo()
    ib, jb, vb = b.tocoo()
    i = np.repeat(ia, b.nnz) * b.rows + np.tile(ib, a.nnz)
    j = np.repeat(ja, b.nnz) * b.cols + np.tile(jb, a.nnz)
    v = np.repeat(va, b.nnz) * np.tile(vb, a.nnz)
    return SparseMatrix.from_coo(rows, cols, i, j, v)


def read_matrix_market(path):
    """Read a coordinate Matrix Market file (real, general or symmetric).

    Symmetric files are expanded to full storage. Malformed content raises
    MatrixMarketError with the offending line number; duplicate entries are
    rejected rather than summed.
    """
    name = os.fspath(path)
    with open(name, "r", encoding="utf-8") as handle:
        lines = handle.readlines()
    if not lines:
        raise MatrixMarketError(f"{name}:1: empty file")
    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket":
        raise MatrixMarketError(f"{name}:1: malformed Matrix Market header")
    obj, fmt, field, symmetry = (tok.lower() for tok in header[1:])
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixMarketError(f"{name}:1: expected 'matrix coordinate', got '{obj} {fmt}'")
    if field != "real":
        raise MatrixMarketError(f"{name}:1: only real-valued matrices are supported")
    if symmetry not in ("general", "symmetric"):
        raise MatrixMarketError(f"{name}:1: unsupported symmetry '{symmetry}'")

    idx = 1
    while idx < len(lines):
        stripped = lines[idx].strip()
        if stripped and not stripped.startswith("%"):
            break
        idx += 1
    if idx == len(lines):
        raise MatrixMarketError(f"{name}:{len(lines)}: missing size line")
    size_lineno = idx + 1
    parts = lines[idx].split()
    try:
        rows, cols, count = (int(p) for p in parts)
    except ValueError:
        raise MatrixMarketError(
            f"{name}:{size_lineno}: size line must hold three integers"
        ) from None
    if len(parts) != 3 or rows < 0 or cols < 0 or count < 0:
        raise MatrixMarketError(f"{name}:{size_lineno}: invalid size line")
    if symmetry == "symmetric" and rows != cols:
        raise MatrixMarketError(f"{name}:{size_lineno}: symmetric matrix must be square")

    ii = np.empty(count, dtype=np.int64)
    jj = np.empty(count, dtype=np.int64)
    vv = np.empty(count, dtype=np.float64)
    linenos = np.empty(count, dtype=np.int64)
    seen = 0
    for offset in range(idx + 1, len(lines)):
        stripped = lines[offset].strip()
        if not stripped or stripped.startswith("%"):
            continue
        lineno = offset + 1
        if seen >= count:
            raise MatrixMarketError(f"{name}:{lineno}: more entries than the declared {count}")
        parts = stripped.split()
        if len(parts) != 3:
            raise MatrixMarketError(f"{name}:{lineno}: entry must be 'row col value'")
        try:
            i = int(parts[0])
            j = int(parts[1])
            v = float(parts[2])
        except ValueError:
            raise MatrixMarketError(f"{name}:{lineno}: could not parse entry") from None
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise MatrixMarketError(
                f"{name}:{lineno}: index ({i}, {j}) outside a {rows} x {cols} matrix"
            )
        ii[seen] = i - 1
        jj[seen] = j - 1
        vv[seen] = v
        linenos[seen] = lineno
        seen += 1
    if seen != count:
        raise MatrixMarketError(
            f"{name}:{len(lines)}: expected {count} entries, found {seen}"
        )

    if count:
        order = np.lexsort((jj, ii))
        si, sj = ii[order], jj[order]
        dup = (si[1:] == si[:-1]) & (sj[1:] == sj[:-1])
        if np.any(dup):
            pos = int(np.argmax(dup)) + 1
            lineno = int(linenos[order][pos])
            raise MatrixMarketError(
                f"{name}:{lineno}: duplicate entry for ({si[pos] + 1}, {sj[pos] + 1})"
            )
    if symmetry == "symmetric":
        off = ii != jj
        mirror_i, mirror_j, mirror_v = jj[off], ii[off], vv[off]
        ii = np.concatenate([ii, mirror_i])
        jj = np.concatenate([jj, mirror_j])
        vv = np.concatenate([vv, mirror_v])
    return SparseMatrix.from_coo(rows, cols, ii, jj, vv)


def write_matrix_market(a, path):
    """Write in coordinate format (general symmetry), 1-based indices.

    Values are printed with 17 significant digits so a read of the written
    file reproduces the matrix exactly.
    """
    i, j, v = a.tocoo()
    body = "\n".join(
        f"{int(r) + 1} {int(c) + 1} {x:.17g}" for r, c, x in zip(i, j, v)
    )
    with open(os.fspath(path), "w", encoding="utf-8") as handle:
        handle.write("%%MatrixMarket matrix coordinate real general\n")
        handle.write(f"{a.rows} {a.cols} {a.nnz}\n")
        if body:
            handle.write(body + "\n")

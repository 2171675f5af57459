import numpy as np
import pytest

from shiftsplit import (
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


def random_sparse(rng, rows, cols, density=0.4):
    count = max(1, int(density * rows * cols))
    i = rng.integers(0, rows, size=count)
    j = rng.integers(0, cols, size=count)
    v = rng.standard_normal(count)
    return SparseMatrix.from_coo(rows, cols, i, j, v)


def test_from_coo_sorts_sums_and_drops_zeros():
    a = SparseMatrix.from_coo(
        2, 3,
        [1, 0, 0, 1, 0],
        [2, 1, 1, 2, 0],
        [5.0, 2.0, 3.0, -5.0, 0.0],
    )
    assert a.nnz == 1
    assert a.toarray().tolist() == [[0.0, 5.0, 0.0], [0.0, 0.0, 0.0]]


def test_from_coo_rejects_out_of_range_indices():
    with pytest.raises(ValueError):
        SparseMatrix.from_coo(2, 2, [0, 2], [0, 0], [1.0, 1.0])
    with pytest.raises(ValueError):
        SparseMatrix.from_coo(2, 2, [0], [-1], [1.0])


def test_construction_validates_offsets_and_columns():
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [0, 1], [0], [1.0])
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [0, 2, 1], [0, 1, 0], [1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        SparseMatrix(1, 3, [0, 2], [1, 1], [1.0, 2.0])
    with pytest.raises(ValueError):
        SparseMatrix(1, 3, [0, 2], [2, 1], [1.0, 2.0])
    with pytest.raises(ValueError):
        SparseMatrix(1, 2, [0, 1], [2], [1.0])


def test_matvec_small_oracle():
    a = SparseMatrix.from_coo(2, 2, [0, 0, 1], [0, 1, 1], [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(a.matvec(np.array([1.0, 1.0])), [3.0, 3.0])
    np.testing.assert_array_equal(spmv(a, np.array([2.0, -1.0])), [0.0, -3.0])


def test_matvec_rejects_wrong_shape():
    a = identity(3)
    with pytest.raises(ValueError):
        a.matvec(np.ones(4))


def test_matvec_handles_complex_vectors():
    a = SparseMatrix.from_coo(2, 2, [0, 1], [1, 0], [1.0, -1.0])
    y = a.matvec(np.array([1.0 + 2.0j, 3.0 - 1.0j]))
    np.testing.assert_allclose(y, [3.0 - 1.0j, -1.0 - 2.0j])


def test_matvec_is_deterministic():
    rng = np.random.default_rng(3)
    a = random_sparse(rng, 40, 40)
    x = rng.standard_normal(40)
    first = a.matvec(x)
    second = a.matvec(x)
    assert np.array_equal(first, second)


def test_arrays_are_immutable():
    a = identity(2)
    with pytest.raises(ValueError):
        a.values[0] = 7.0


def test_build_tridiag_oracle_and_unstored_zero_diagonals():
    t = build_tridiag(3, -1.0, 2.0, -1.0)
    expected = [[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]]
    assert t.toarray().tolist() == expected

    f = build_tridiag(4, -1.0, 1.0, 0.0, scale=2.0)
    assert f.nnz == 7
    assert f.toarray()[0, 1] == 0.0
    assert f.toarray()[1, 0] == -2.0


def test_identity_matvec():
    x = np.arange(5.0)
    np.testing.assert_array_equal(identity(5).matvec(x), x)


def test_transpose_matches_dense():
    rng = np.random.default_rng(5)
    a = random_sparse(rng, 4, 7)
    np.testing.assert_array_equal(transpose(a).toarray(), a.toarray().T)
    assert transpose(a).nnz == a.nnz


def test_add_cancels_to_empty():
    rng = np.random.default_rng(8)
    a = random_sparse(rng, 5, 5)
    assert add(a, a, beta=-1.0).nnz == 0
    np.testing.assert_allclose(add(a, a, beta=2.0).toarray(), 3.0 * a.toarray())


def test_add_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        add(identity(2), identity(3))


def test_scale_by_zero_empties_the_matrix():
    a = identity(4)
    assert scale(a, 0.0).nnz == 0
    np.testing.assert_array_equal(scale(a, -2.5).toarray(), -2.5 * np.eye(4))


def test_vstack_matches_dense():
    rng = np.random.default_rng(11)
    a = random_sparse(rng, 3, 4)
    b = random_sparse(rng, 2, 4)
    np.testing.assert_array_equal(
        vstack(a, b).toarray(), np.vstack([a.toarray(), b.toarray()])
    )
    with pytest.raises(ValueError):
        vstack(a, random_sparse(rng, 2, 5))


def test_kron_matches_dense():
    rng = np.random.default_rng(13)
    a = random_sparse(rng, 3, 2)
    b = random_sparse(rng, 2, 3)
    np.testing.assert_allclose(
        kron(a, b).toarray(), np.kron(a.toarray(), b.toarray()), atol=0.0
    )


def test_matrix_market_round_trip_is_exact(tmp_path, rng):
    a = random_sparse(rng, 9, 6)
    path = tmp_path / "a.mtx"
    write_matrix_market(a, path)
    assert read_matrix_market(path) == a


def test_matrix_market_written_file_uses_one_based_indices(tmp_path):
    a = SparseMatrix.from_coo(2, 2, [0], [1], [3.5])
    path = tmp_path / "one.mtx"
    write_matrix_market(a, path)
    text = path.read_text()
    assert text.splitlines()[0] == "%%MatrixMarket matrix coordinate real general"
    assert text.splitlines()[2] == "1 2 3.5"


def test_matrix_market_symmetric_expansion(tmp_path):
    path = tmp_path / "sym.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 2\n"
        "1 1 4\n"
        "2 1 -1\n"
    )
    a = read_matrix_market(path)
    assert a.toarray().tolist() == [[4.0, -1.0], [-1.0, 0.0]]


def test_matrix_market_comments_and_blank_lines_are_skipped(tmp_path):
    path = tmp_path / "c.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real general\n"
        "% a comment\n"
        "\n"
        "2 2 1\n"
        "% another\n"
        "2 2 7\n"
    )
    a = read_matrix_market(path)
    assert a.toarray()[1][1] == 7.0


@pytest.mark.parametrize(
    "body, lineno",
    [
        ("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n", 1),
        ("%%MatrixMarket matrix coordinate real skew-symmetric\n1 1 1\n1 1 1\n", 1),
        ("%%MatrixMarket vector coordinate real general\n1 1 1\n1 1 1\n", 1),
        ("not a header\n1 1 1\n1 1 1\n", 1),
        ("%%MatrixMarket matrix coordinate real general\n1 one 1\n", 2),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5\n", 3),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1\n", 3),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 x\n", 3),
        ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5\n1 1 6\n", 4),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 5\n2 2 6\n", 4),
    ],
)
def test_matrix_market_errors_carry_line_numbers(tmp_path, body, lineno):
    path = tmp_path / "bad.mtx"
    path.write_text(body)
    with pytest.raises(MatrixMarketError, match=f"bad.mtx:{lineno}:"):
        read_matrix_market(path)


def test_matrix_market_missing_entries(tmp_path):
    path = tmp_path / "short.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5\n")
    with pytest.raises(MatrixMarketError, match="expected 2 entries, found 1"):
        read_matrix_market(path)


def test_matrix_market_empty_file(tmp_path):
    path = tmp_path / "empty.mtx"
    path.write_text("")
    with pytest.raises(MatrixMarketError, match="empty.mtx:1"):
        read_matrix_market(path)


@pytest.mark.property
def test_spmv_is_linear(rng):
    for _ in range(25):
        rows = int(rng.integers(1, 12))
        cols = int(rng.integers(1, 12))
        a = random_sparse(rng, rows, cols)
        x = rng.standard_normal(cols)
        y = rng.standard_normal(cols)
        ca, cb = rng.standard_normal(2)
        lhs = a.matvec(ca * x + cb * y)
        rhs = ca * a.matvec(x) + cb * a.matvec(y)
        assert np.linalg.norm(lhs - rhs) <= 1e-13 * max(1.0, np.linalg.norm(rhs))


@pytest.mark.property
def test_kron_mixed_product_on_vectors(rng):
    for _ in range(25):
        a = random_sparse(rng, 3, 3, density=0.6)
        b = random_sparse(rng, 3, 3, density=0.6)
        x = rng.standard_normal(3)
        y = rng.standard_normal(3)
        lhs = kron(a, b).matvec(np.kron(x, y))
        rhs = np.kron(a.matvec(x), b.matvec(y))
        assert np.linalg.norm(lhs - rhs) <= 1e-13 * max(1.0, np.linalg.norm(rhs))


@pytest.mark.property
def test_kron_nnz_is_multiplicative(rng):
    for _ in range(25):
        a = random_sparse(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        b = random_sparse(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        assert nnz(kron(a, b)) == nnz(a) * nnz(b)


@pytest.mark.property
def test_transpose_adjoint_identity(rng):
    for _ in range(25):
        rows = int(rng.integers(1, 12))
        cols = int(rng.integers(1, 12))
        a = random_sparse(rng, rows, cols)
        at = transpose(a)
        assert at.nnz == a.nnz
        x = rng.standard_normal(cols)
        y = rng.standard_normal(rows)
        lhs = float(a.matvec(x) @ y)
        rhs = float(x @ at.matvec(y))
        assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(rhs))

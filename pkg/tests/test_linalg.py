from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qpcoh.errors import ResourceError
from qpcoh.linalg import (
    SparseRationalMatrix,
    as_scalar,
    check_size,
    column_space_basis,
    entry_cap,
    image_meet_coordinate_subspace,
    kernel_basis,
    kernel_dim,
    rank,
    scalar_str,
    solve,
)

small_q = st.one_of(
    st.integers(-3, 3),
    st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4)),
)


@st.composite
def matrices(draw, max_rows=7, max_cols=7):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    # mostly zeros, like coboundary matrices
    cell = st.one_of(st.just(0), st.just(0), small_q)
    data = draw(st.lists(st.lists(cell, min_size=c, max_size=c), min_size=r, max_size=r))
    return SparseRationalMatrix.from_dense(data, ncols=c)


def sympy_rank(M):
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return sympy.Matrix(M.nrows, M.ncols, lambda i, j: sympy.Rational(str(Fraction(M[i, j])))).rank()


def test_rank_small_examples():
    assert rank(SparseRationalMatrix.from_dense([[1, 2], [2, 4]])) == 1
    assert rank(SparseRationalMatrix.from_dense([[1, 0], [0, 1]])) == 2
    assert rank(SparseRationalMatrix(3, 4)) == 0
    assert rank(SparseRationalMatrix(0, 5)) == 0


def test_rank_with_fractions():
    M = SparseRationalMatrix.from_dense([[Fraction(1, 2), Fraction(1, 3)], [3, 2]])
    assert rank(M) == 1


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_matches_sympy(M):
    assert rank(M) == sympy_rank(M)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rank_is_transpose_invariant(M):
    assert rank(M) == rank(M.T)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_rank_invariant_under_row_operations(M, data):
    if M.nrows < 2:
        return
    a = data.draw(st.integers(0, M.nrows - 1))
    b = data.draw(st.integers(0, M.nrows - 1))
    f = data.draw(st.sampled_from([Fraction(-2), Fraction(1, 3), Fraction(5, 7)]))
    assert rank(M.swap_rows(a, b)) == rank(M)
    assert rank(M.scale_row(a, f)) == rank(M)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_basis_is_kernel(M):
    basis = kernel_basis(M)
    assert len(basis) == kernel_dim(M)
    for v in basis:
        assert not M.apply(v)
    if basis:
        assert rank(SparseRationalMatrix.from_columns(M.ncols, basis)) == len(basis)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_image_meet_matches_augmented_rank(M, data):
    if M.nrows == 0:
        return
    S = data.draw(st.sets(st.integers(0, M.nrows - 1)))
    # rank(M) + |S| - rank([M | E_S]), with E_S formed explicitly
    E = SparseRationalMatrix.from_columns(M.nrows, [{s: 1} for s in sorted(S)]) if S else SparseRationalMatrix(M.nrows, 0)
    expected = rank(M) + len(S) - rank(M.hstack(E)) if M.ncols + len(S) else 0
    assert image_meet_coordinate_subspace(M, S) == expected


def test_image_meet_examples():
    M = SparseRationalMatrix.from_dense([[1, 0], [1, 0], [0, 1]])
    assert image_meet_coordinate_subspace(M, [2]) == 1
    assert image_meet_coordinate_subspace(M, [0]) == 0
    assert image_meet_coordinate_subspace(M, [0, 1]) == 1
    assert image_meet_coordinate_subspace(M, []) == 0
    with pytest.raises(IndexError):
        image_meet_coordinate_subspace(M, [3])


@settings(max_examples=60, deadline=None)
@given(matrices(max_rows=5, max_cols=5), st.data())
def test_solve_roundtrip(M, data):
    if M.ncols == 0:
        return
    x = {j: data.draw(small_q) for j in range(M.ncols)}
    b = M.apply(x)
    sol = solve(M, b)
    assert sol is not None
    assert M.apply(sol) == b


def test_solve_inconsistent():
    M = SparseRationalMatrix.from_dense([[1], [1]])
    assert solve(M, {0: 1, 1: 2}) is None


def test_column_space_basis_spans():
    M = SparseRationalMatrix.from_dense([[1, 2, 0], [2, 4, 1]])
    basis = column_space_basis(M)
    assert len(basis) == 2


def test_matmul_and_transpose():
    A = SparseRationalMatrix.from_dense([[1, 2], [0, 1]])
    B = SparseRationalMatrix.from_dense([[1, -2], [0, 1]])
    assert (A @ B) == SparseRationalMatrix.identity(2)
    assert A.T.to_dense() == [[1, 0], [2, 1]]


def test_scalars_are_exact():
    assert as_scalar("3/6") == Fraction(1, 2)
    assert as_scalar("4/2") == 2 and isinstance(as_scalar("4/2"), int)
    assert scalar_str(Fraction(-2, 4)) == "-1/2"
    with pytest.raises(TypeError):
        as_scalar(0.5)
    with pytest.raises(TypeError):
        as_scalar(True)
    with pytest.raises(ZeroDivisionError):
        as_scalar("1/0")


def test_entry_cap(monkeypatch):
    monkeypatch.setenv("QPCOH_ENTRY_CAP", "100")
    assert entry_cap() == 100
    with pytest.raises(ResourceError) as err:
        check_size(20, 20)
    assert err.value.shape == (20, 20)
    with pytest.raises(ResourceError):
        rank(SparseRationalMatrix.from_dense([[1] * 20] * 20))
    check_size(20, 20, cap=1000)

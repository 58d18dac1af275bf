from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semidirect.linalg import (
    LinearSystem,
    Matrix,
    SingularMatrix,
    determinant,
    format_rational,
    in_span,
    kernel_basis,
    parse_rational,
    rank,
    rref,
    span_basis,
)

import oracles

small = st.integers(min_value=-3, max_value=3)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


square = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n))


def test_parse_rational_accepts_fractions_only():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("7") == 7
    for bad in ("0.5", "1e3", "1/", "a", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_format_rational_normalizes():
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(Fraction(-6, 3)) == "-2"


def test_matrix_basics():
    A = Matrix([[1, 2], [3, 4]])
    assert A.shape == (2, 2)
    assert A.T == Matrix([[1, 3], [2, 4]])
    assert A @ Matrix.identity(2) == A
    assert A.col(0) == (1, 3)
    assert A @ (1, 1) == (3, 7)
    assert A.det() == -2
    assert A @ A.inverse() == Matrix.identity(2)
    assert Matrix.from_columns([(1, 3), (2, 4)]) == A


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrix):
        Matrix([[1, 2], [2, 4]]).inverse()


def test_rref_reduced_form():
    rows, pivots = rref(Matrix([[0, 2, 4], [1, 1, 1], [1, 3, 5]]))
    assert pivots == [0, 1]
    assert rows[0] == [1, 0, -1]
    assert rows[1] == [0, 1, 2]


@given(square)
def test_determinant_matches_leibniz(rows):
    assert determinant(Matrix(rows)) == oracles.det([[Fraction(c) for c in r] for r in rows])


@given(matrices())
def test_rank_matches_minors(rows):
    assert rank(Matrix(rows)) == oracles.rank([[Fraction(c) for c in r] for r in rows])


@given(matrices())
def test_kernel_is_kernel_of_right_size(rows):
    A = Matrix(rows)
    ker = kernel_basis(A)
    assert len(ker) == A.cols - rank(A)
    for v in ker:
        assert not any(A @ v)
    if ker:
        assert rank(Matrix(ker)) == len(ker)


@given(square)
def test_inverse_or_singular(rows):
    A = Matrix(rows)
    if A.det() == 0:
        with pytest.raises(SingularMatrix):
            A.inverse()
    else:
        assert A.inverse() @ A == Matrix.identity(A.rows)


@given(matrices(), matrices())
def test_product_associates_with_transpose(a, b):
    A, B = Matrix(a), Matrix(b)
    if A.cols != B.rows:
        return
    assert (A @ B).T == B.T @ A.T


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4), st.lists(small, min_size=3,
                                                                                            max_size=3))
def test_span_membership(vectors, v):
    vecs = [tuple(Fraction(c) for c in u) for u in vectors]
    basis = span_basis(vecs, 3)
    assert len(basis) == rank(Matrix(vecs))
    for u in vecs:
        assert in_span(u, basis)
    w = tuple(Fraction(c) for c in v)
    assert in_span(w, basis) == (rank(Matrix(vecs + [w])) == rank(Matrix(vecs)))


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_linear_system_agrees_with_dense_rank(rows, rhs):
    A = Matrix(rows)
    b = rhs[:A.rows]
    system = LinearSystem(A.cols)
    for r in range(A.rows):
        system.add({c: A[r, c] for c in range(A.cols)}, b[r])
    augmented = Matrix([list(A.row(r)) + [b[r]] for r in range(A.rows)])
    assert system.rank == rank(A)
    assert system.feasible == (rank(augmented) == rank(A))
    if system.feasible:
        x = system.particular_solution()
        assert A @ x == tuple(Fraction(c) for c in b)
        hom = system.homogeneous_basis()
        assert len(hom) == A.cols - rank(A)
        for v in hom:
            assert not any(A @ v)
    else:
        assert system.particular_solution() is None
        assert system.witness is not None


def test_linear_system_unique():
    s = LinearSystem(2)
    s.add({0: 1, 1: 1}, 3)
    s.add({0: 1, 1: -1}, 1)
    assert s.unique
    assert s.particular_solution() == (2, 1)
    s.add({0: 2, 1: 2}, 7)
    assert not s.feasible

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndepth.exactmath import (
    SparseMatrix,
    SubquotientError,
    format_scalar,
    in_span,
    kernel_matrix,
    rank,
    rank_kernel,
    subquotient_dim,
    to_scalar,
)

small = st.integers(-3, 3)


def matrices(max_r=5, max_c=5):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    )


def test_scalar_parsing():
    assert to_scalar("1/3") == Fraction(1, 3)
    assert to_scalar(" -4 ") == -4
    assert format_scalar(Fraction(-2, 6)) == "-1/3"
    with pytest.raises(TypeError):
        to_scalar(0.5)
    with pytest.raises(TypeError):
        to_scalar(True)
    with pytest.raises(ValueError):
        to_scalar("1/0")
    with pytest.raises(ValueError):
        to_scalar("pi")


def test_identity_and_product():
    A = SparseMatrix.from_dense([[1, 2], [0, 1]])
    assert A @ SparseMatrix.identity(2) == A
    assert (A @ A).to_dense() == [[1, 4], [0, 1]]
    assert (A - A).is_zero()
    assert A.power(0) == SparseMatrix.identity(2)


def test_nilpotent_power():
    J = SparseMatrix.from_dense([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert not J.power(2).is_zero()
    assert J.power(3).is_zero()


def test_subquotient_checks_composite():
    D = SparseMatrix.from_dense([[0, 1], [0, 0]])
    assert subquotient_dim(D, D) == 0
    with pytest.raises(SubquotientError):
        subquotient_dim(D, SparseMatrix.identity(2))


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(rows):
    M = SparseMatrix.from_dense(rows)
    r, ker = rank_kernel(M)
    assert r + len(ker) == M.ncols
    for v in ker:
        assert not any(M.apply(v).values())
    assert rank(M) == rank(M.transpose())


@given(matrices())
@settings(max_examples=40, deadline=None)
def test_kernel_columns_independent(rows):
    M = SparseMatrix.from_dense(rows)
    K = kernel_matrix(M)
    assert (M @ K).is_zero()
    assert rank(K) == K.ncols


def test_in_span():
    vs = [{0: Fraction(1), 1: Fraction(1)}]
    assert in_span(vs, {0: Fraction(2), 1: Fraction(2)}, 2)
    assert not in_span(vs, {0: Fraction(1)}, 2)
    assert in_span([], {}, 2)

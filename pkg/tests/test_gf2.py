import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import dense_rank, enumerate_kernel
from symatch import gf2
from symatch.gf2 import BinaryMatrix, NoSolution


def bit_matrices(max_rows=24, max_cols=80):
    shapes = st.tuples(st.integers(1, max_rows), st.integers(1, max_cols))
    return shapes.flatmap(lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


def test_pack_roundtrip_wide():
    rng = np.random.default_rng(0)
    dense = rng.integers(0, 2, (7, 130), dtype=np.uint8)
    M = BinaryMatrix.from_dense(dense)
    assert M.shape == (7, 130)
    assert np.array_equal(M.to_dense(), dense)
    assert np.array_equal(M.T.to_dense(), dense.T)


def test_identity_reduces_to_itself():
    red = gf2.rref_with_transform(np.eye(4, dtype=np.uint8))
    assert red.reduced == BinaryMatrix.identity(4)
    assert red.transform == BinaryMatrix.identity(4)


def test_rank_one_two_by_two():
    red = gf2.rref_with_transform(np.array([[1, 1], [1, 1]], np.uint8))
    assert list(red.pivots) == [0]
    assert np.array_equal(red.reduced.to_dense(), [[1, 1], [0, 0]])
    assert np.array_equal(red.transform.to_dense(), [[1, 0], [1, 1]])


@settings(max_examples=60, deadline=None)
@given(bit_matrices())
def test_rank_matches_oracle(dense):
    assert gf2.rank(dense) == dense_rank(dense)
    assert gf2.rank(dense) == gf2.rank(dense.T)


@settings(max_examples=60, deadline=None)
@given(bit_matrices())
def test_transform_reproduces_reduced_form(dense):
    red = gf2.rref_with_transform(dense)
    assert np.array_equal(gf2.matmul_mod2(red.transform.to_dense(), dense), red.reduced.to_dense())
    assert gf2.rank(red.transform) == dense.shape[0]


def test_random_20x30_rank():
    rng = np.random.default_rng(20)
    dense = rng.integers(0, 2, (20, 30), dtype=np.uint8)
    assert gf2.rank(dense) == dense_rank(dense)


def test_kernel_edge_cases():
    assert gf2.kernel(np.eye(5, dtype=np.uint8)).shape == (0, 5)
    assert gf2.kernel(np.zeros((3, 5), np.uint8)).shape == (5, 5)


@settings(max_examples=40, deadline=None)
@given(bit_matrices(max_rows=6, max_cols=9))
def test_kernel_spans_enumerated_nullspace(dense):
    basis = gf2.kernel(dense)
    assert not gf2.matmul_mod2(dense, basis.T).any()
    assert basis.shape[0] == dense.shape[1] - dense_rank(dense)
    assert 2 ** basis.shape[0] == len(enumerate_kernel(dense))


def test_gross_kernel_dimension(gross):
    # 144 - rank(H_Z) with rank 66 for the [[144,12,12]] code
    assert gf2.kernel(gross.hz).shape == (78, 144)


def test_solve_identity_and_zero():
    b = np.array([1, 0, 1, 1], np.uint8)
    assert np.array_equal(gf2.solve(np.eye(4, dtype=np.uint8), b), b)
    M = np.random.default_rng(1).integers(0, 2, (5, 8), dtype=np.uint8)
    assert not gf2.solve(M, np.zeros(5, np.uint8)).any()


def test_solve_consistent_random_system():
    rng = np.random.default_rng(30)
    M = rng.integers(0, 2, (30, 50), dtype=np.uint8)
    b = gf2.matmul_mod2(M, rng.integers(0, 2, 50, dtype=np.uint8))
    x = gf2.solve(M, b)
    assert np.array_equal(gf2.matmul_mod2(M, x), b)


def test_solve_inconsistent():
    M = np.array([[1, 1], [1, 1]], np.uint8)
    with pytest.raises(NoSolution):
        gf2.solve(M, np.array([1, 0], np.uint8))
    with pytest.raises(ValueError):
        gf2.solve(M, np.array([1, 0, 0], np.uint8))


def test_inverse():
    rng = np.random.default_rng(4)
    while True:
        M = rng.integers(0, 2, (9, 9), dtype=np.uint8)
        if dense_rank(M) == 9:
            break
    Minv = gf2.inverse(M).to_dense()
    assert np.array_equal(gf2.matmul_mod2(M, Minv), np.eye(9, dtype=np.uint8))
    with pytest.raises(NoSolution):
        gf2.inverse(np.ones((3, 3), np.uint8))


def test_smith_trivial_cases():
    U, D, W = gf2.smith_normal_form(np.eye(5, dtype=np.uint8))
    for f in (U, D, W):
        assert f == BinaryMatrix.identity(5)
    U, D, W = gf2.smith_normal_form(np.zeros((3, 4), np.uint8))
    assert not D.to_dense().any()


@settings(max_examples=40, deadline=None)
@given(bit_matrices(max_rows=12, max_cols=14))
def test_smith_reconstructs(dense):
    U, D, W = gf2.smith_normal_form(dense)
    back = gf2.matmul_mod2(gf2.matmul_mod2(U.to_dense(), D.to_dense()), W.to_dense())
    assert np.array_equal(back, dense)
    r = dense_rank(dense)
    assert np.array_equal(D.to_dense(), np.eye(*dense.shape, dtype=np.uint8) * (np.arange(dense.shape[0]) < r)[:, None])
    assert gf2.rank(U) == dense.shape[0] and gf2.rank(W) == dense.shape[1]


def test_smith_random_10x12():
    M = np.random.default_rng(10).integers(0, 2, (10, 12), dtype=np.uint8)
    U, D, W = gf2.smith_normal_form(M)
    assert np.array_equal((U @ D @ W).to_dense(), M)


def test_matrix_is_immutable():
    M = BinaryMatrix.identity(3)
    with pytest.raises(AttributeError):
        M.rows = 4
    assert hash(M) == hash(BinaryMatrix.identity(3))
    assert (M + M) == BinaryMatrix.zeros(3, 3)


def test_independent_rows_and_rowspace():
    rows = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0], [0, 0, 1]], np.uint8)
    assert gf2.independent_rows(rows) == [0, 1, 3]
    assert gf2.in_rowspace(rows[:2], rows[2])
    assert not gf2.in_rowspace(rows[:2], rows[3])
    assert gf2.in_rowspace(np.zeros((0, 3), np.uint8), np.zeros(3, np.uint8))

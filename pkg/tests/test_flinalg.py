import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from monodual.flinalg import (
    Matrix,
    block_direct_sum,
    check_odd_prime,
    inverse,
    is_invertible,
    kernel_basis,
    kronecker,
    rank,
    unvec_cm,
    vec_cm,
)


def M(data, p=3):
    return Matrix.make(data, p)


def test_odd_prime_validation():
    for p in (3, 5, 7, 11):
        assert check_odd_prime(p) == p
    for p in (1, 2, 4, 9, 15):
        with pytest.raises(ValueError):
            check_odd_prime(p)


def test_kronecker_identity_case():
    assert kronecker(Matrix.identity(2, 3), Matrix.identity(3, 3)) == Matrix.identity(6, 3)


def test_kronecker_hand_example():
    # expand the definition by hand: block (r, s) is a[r, s] * b
    a = M([[1, 2], [0, 1]])
    b = M([[1], [1]])
    assert kronecker(a, b) == M([[1, 2], [1, 2], [0, 1], [0, 1]])


def _commutation(m, n, p):
    out = np.zeros((m * n, m * n), dtype=np.int64)
    for r in range(m):
        for s in range(n):
            out[s * m + r, r * n + s] = 1
    return Matrix.make(out, p)


def test_kronecker_flip_by_permutation():
    # a (x) b and b (x) a are conjugate by explicit commutation matrices
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = M(rng.integers(0, 3, (2, 2)))
        b = M(rng.integers(0, 3, (2, 2)))
        k_rows = _commutation(a.rows, b.rows, 3)
        k_cols = _commutation(a.cols, b.cols, 3)
        assert k_rows @ kronecker(a, b) == kronecker(b, a) @ k_cols


def test_kronecker_associative_exactly():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = M(rng.integers(0, 3, (2, 3)))
        b = M(rng.integers(0, 3, (3, 2)))
        c = M(rng.integers(0, 3, (2, 2)))
        assert kronecker(kronecker(a, b), c) == kronecker(a, kronecker(b, c))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3),
       st.integers(0, 2**30))
def test_kronecker_rank_multiplicative(r1, c1, r2, c2, seed):
    rng = np.random.default_rng(seed)
    a = M(rng.integers(0, 3, (r1, c1)))
    b = M(rng.integers(0, 3, (r2, c2)))
    assert rank(kronecker(a, b)) == rank(a) * rank(b)


def test_block_direct_sum_examples():
    assert block_direct_sum([M([[1]]), M([[2]])]) == M([[1, 0], [0, 2]])
    single = M([[1, 2], [0, 1]])
    assert block_direct_sum([single]) == single
    # ordering matters and matches the argument order
    parts = [M([[1]]), M([[2]]), M([[0]])]
    assert block_direct_sum(parts) == M([[1, 0, 0], [0, 2, 0], [0, 0, 0]])


def test_is_invertible_examples():
    assert is_invertible(Matrix.identity(4, 3))
    assert not is_invertible(Matrix.zeros(2, 2, 3))
    # row reduce by hand: second row is twice the first
    assert not is_invertible(Matrix.make([[1, 2], [2, 4]], 5))
    assert not is_invertible(Matrix.zeros(2, 3, 3))


def test_inverse_and_kernel():
    rng = np.random.default_rng(2)
    found = 0
    while found < 10:
        a = M(rng.integers(0, 3, (3, 3)))
        if not is_invertible(a):
            ker = kernel_basis(a)
            assert ker.cols == 3 - rank(a)
            if ker.cols:
                assert (a @ ker).is_zero()
            continue
        assert a @ inverse(a) == Matrix.identity(3, 3)
        found += 1


def test_exact_arithmetic_dtype():
    a = M([[1, 2], [2, 1]])
    assert a.a.dtype == np.int64
    assert (a @ a).a.dtype == np.int64


def test_vec_roundtrip_column_major():
    a = M([[1, 2, 0], [0, 1, 2]])
    v = vec_cm(a)
    # column-major stacks columns
    assert v.tolist() == [1, 0, 2, 1, 0, 2]
    assert unvec_cm(v, a.rows, a.cols, 3) == a


def test_matrix_json_roundtrip():
    a = M([[1, 2], [0, 1]])
    assert Matrix.from_json(a.to_json(), 3) == a

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afk.linalg import (
    DimensionMismatch,
    IntMatrix,
    NotSquare,
    Subspace,
    eventual_rank,
    image_through,
    multiply,
    power,
    rank,
)
from oracles import naive_rank


def M(rows):
    return IntMatrix.from_rows(rows)


def test_rank_invertible_triangular():
    assert rank(M([[1, 0], [1, 1]])) == 2


def test_rank_equal_rows():
    assert rank(M([[1, 1], [1, 1]])) == 1


def test_rank_worked_connecting_matrix():
    # expected value 3 frozen from the naive elimination oracle below
    mat = [[1, 0, 0], [1, 1, 0], [2, 0, 1], [0, 1, 2]]
    assert naive_rank(mat) == 3
    assert rank(M(mat)) == 3


def test_rank_degenerate_shapes():
    assert rank(IntMatrix.zeros(0, 0)) == 0
    assert rank(IntMatrix.zeros(3, 0)) == 0
    assert rank(IntMatrix.zeros(0, 3)) == 0
    assert rank(IntMatrix.zeros(2, 5)) == 0


def test_multiply_identity():
    phi = M([[1, 0, 0], [1, 1, 0], [2, 0, 1], [0, 1, 2]])
    assert multiply(IntMatrix.identity(4), phi) == phi
    assert multiply(phi, IntMatrix.identity(3)) == phi


def test_multiply_hand_example():
    a = M([[1, 0], [1, 1]])
    assert multiply(a, a) == M([[1, 0], [2, 1]])


def test_multiply_shape_error():
    with pytest.raises(DimensionMismatch):
        multiply(M([[1, 2]]), M([[1, 2]]))


def test_eventual_rank_nilpotent():
    assert eventual_rank(M([[0, 1], [0, 0]])) == 0


def test_eventual_rank_invertible():
    assert eventual_rank(M([[1, 0], [1, 1]])) == 2


def test_eventual_rank_idempotent_like():
    # rank([[1,1],[1,1]]^2) = 1, computed by hand
    assert eventual_rank(M([[1, 1], [1, 1]])) == 1


def test_eventual_rank_rejects_rectangular():
    with pytest.raises(NotSquare):
        eventual_rank(IntMatrix.zeros(2, 3))


def test_eventual_rank_empty():
    assert eventual_rank(IntMatrix.zeros(0, 0)) == 0


def test_eventual_rank_equals_rank_of_nth_power():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 6)
        m = M([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        assert eventual_rank(m) == rank(power(m, n))


def test_image_through_identity_and_zero():
    s = Subspace.from_vectors(2, [[1, 0], [0, 1]])
    assert image_through(IntMatrix.identity(2), s) == s
    assert image_through(IntMatrix.zeros(3, 2), s) == Subspace.zero(3)


def test_image_through_shear():
    s = Subspace.from_vectors(2, [[1, 0]])
    out = image_through(M([[1, 0], [1, 1]]), s)
    assert out == Subspace.from_vectors(2, [[1, 1]])


def test_image_through_dim_mismatch():
    with pytest.raises(DimensionMismatch):
        image_through(M([[1, 0], [1, 1]]), Subspace.full(3))


def test_subspace_canonical_equality():
    a = Subspace.from_vectors(3, [[2, 4, 0], [0, 0, 5]])
    b = Subspace.from_vectors(3, [[1, 2, 5], [0, 0, 1]])
    assert a == b
    assert a.dim == 2


def test_subspace_contains():
    s = Subspace.from_vectors(3, [[1, 0, 1], [0, 1, 1]])
    assert s.contains([1, 1, 2])
    assert not s.contains([1, 1, 0])
    assert s.contains([0, 0, 0])


def test_rank_agrees_with_naive_oracle_on_1000_random_matrices():
    rng = random.Random(20240517)
    for _ in range(1000):
        nrows = rng.randint(1, 8)
        ncols = rng.randint(1, 8)
        rows = [[rng.randint(-9, 9) for _ in range(ncols)] for _ in range(nrows)]
        assert rank(M(rows)) == naive_rank(rows)


def _matrix_strategy(rows, cols):
    return st.lists(
        st.lists(st.integers(-5, 5), min_size=cols, max_size=cols),
        min_size=rows,
        max_size=rows,
    )


@settings(max_examples=200)
@given(
    st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4)).flatmap(
        lambda dims: st.tuples(
            _matrix_strategy(dims[0], dims[1]), _matrix_strategy(dims[1], dims[2])
        )
    )
)
def test_rank_of_product_bounded_by_factors(ab):
    a = M(ab[0])
    b = M(ab[1])
    assert rank(multiply(a, b)) <= min(rank(a), rank(b))


@settings(max_examples=200)
@given(
    st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=2, max_size=4),
)
def test_image_through_monotone(small, extra, mat_rows):
    s = Subspace.from_vectors(3, small)
    t = Subspace.from_vectors(3, small + extra)
    assert s.is_subspace_of(t)
    m = M(mat_rows)
    assert image_through(m, s).is_subspace_of(image_through(m, t))


def test_operations_are_pure():
    rows = [[3, -1, 2], [0, 4, 4], [3, 3, 6]]
    m = M(rows)
    r1 = rank(m)
    r2 = rank(m)
    assert r1 == r2
    assert m == M(rows)
    s = Subspace.from_vectors(3, [[1, 2, 3]])
    assert image_through(m, s) == image_through(m, s)


def test_subspace_fraction_entries_are_exact():
    s = Subspace.from_vectors(2, [[2, 3]])
    assert s.basis == ((Fraction(1), Fraction(3, 2)),)

from fractions import Fraction
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgxray import exactla
from pgxray.errors import InconsistentData, NotSquare


def naive_rank(rows):
    """Plain Gaussian elimination over Fraction, largest-index-free and unoptimized."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def leibniz_det(rows):
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = (-1) ** inversions
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


matrices = st.integers(1, 12).flatmap(
    lambda n: st.integers(1, 12).flatmap(
        lambda m: st.lists(st.lists(st.integers(-5, 5), min_size=m, max_size=m), min_size=n, max_size=n)
    )
)


def test_rank_examples():
    assert exactla.rank_exact(np.eye(5, dtype=int)) == 5
    assert exactla.rank_exact(np.zeros((4, 6), dtype=int)) == 0
    assert exactla.rank_exact([[1, 2], [2, 4]]) == 1


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_rational_oracle(rows):
    assert exactla.rank_exact(rows) == naive_rank(rows)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_of_transpose(rows):
    a = np.array(rows)
    assert exactla.rank_exact(a) == exactla.rank_exact(a.T)


def test_rank_matches_oracle_up_to_50x50():
    rnd = np.random.default_rng(7)
    for n, m, r in [(50, 50, 50), (50, 50, 31), (40, 50, 12), (50, 30, 29)]:
        a = rnd.integers(-3, 4, size=(n, r)) @ rnd.integers(-3, 4, size=(r, m))
        assert exactla.rank_exact(a) == naive_rank(a.tolist())


def test_rank_with_huge_entries():
    big = 10**40
    a = [[big, big + 1], [big - 1, big]]
    assert exactla.rank_exact(a) == 2
    assert exactla.det_exact(a) == big * big - (big + 1) * (big - 1)


def test_modular_cross_check():
    rnd = np.random.default_rng(3)
    a = rnd.integers(-9, 10, size=(20, 7)) @ rnd.integers(-9, 10, size=(7, 25))
    assert exactla.rank_exact(a, cross_check=True) == 7
    for p in exactla.random_primes(3):
        assert p > 2**60
        assert exactla.rank_mod_p(a, p) == 7


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_leibniz(rows):
    assert exactla.det_exact(rows) == leibniz_det(rows)


def test_kernel_examples():
    assert exactla.kernel_basis(np.eye(4, dtype=int)) == []
    (v,) = exactla.kernel_basis([[1, 1]])
    assert v == [Fraction(-1), Fraction(1)] or v == [Fraction(1), Fraction(-1)]


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_kernel_dimension_and_annihilation(rows):
    basis = exactla.kernel_basis(rows)
    ncols = len(rows[0])
    assert len(basis) == ncols - naive_rank(rows)
    for v in basis:
        assert all(x == 0 for x in exactla.mat_vec(rows, v))
    if basis:
        assert naive_rank(basis) == len(basis)


def test_eigen_multiplicity():
    assert exactla.eigen_multiplicity(np.eye(6, dtype=int), 1) == 6
    assert exactla.eigen_multiplicity(np.eye(6, dtype=int), 0) == 0
    with pytest.raises(NotSquare):
        exactla.eigen_multiplicity(np.ones((2, 3), dtype=int), 0)


def test_scaled_projection_multiplicities_add_up():
    # symmetric M with M^2 = v M: v * (orthogonal projection onto a 3-dim subspace)
    rnd = np.random.default_rng(11)
    basis = rnd.integers(-2, 3, size=(8, 3))
    # P = B (B^t B)^{-1} B^t, scaled to integers by det(B^t B)
    gram = basis.T @ basis
    d = exactla.det_exact(gram)
    adj = np.array([[(-1) ** (i + j) * exactla.det_exact(np.delete(np.delete(gram, j, 0), i, 1))
                     for j in range(3)] for i in range(3)], dtype=object)
    m = exactla.as_int_matrix(basis).dot(adj).dot(exactla.as_int_matrix(basis.T))
    assert (m.dot(m) == d * m).all()
    assert exactla.eigen_multiplicity(m, d) + exactla.eigen_multiplicity(m, 0) == 8
    assert exactla.eigen_multiplicity(m, d) == 3


def test_solve_exact():
    a = [[2, 1], [1, 3]]
    x = exactla.solve_exact(a, [Fraction(1, 2), 4])
    assert exactla.mat_vec(a, x) == [Fraction(1, 2), 4]
    # over-determined and consistent
    x = exactla.solve_exact([[1, 0], [0, 1], [1, 1]], [1, 2, 3])
    assert x == [1, 2]
    with pytest.raises(InconsistentData):
        exactla.solve_exact([[1, 0], [0, 1], [1, 1]], [1, 2, 4])
    with pytest.raises(ValueError):
        exactla.solve_exact([[1, 1], [2, 2]], [1, 2])


def test_mat_mul_switches_to_python_ints():
    a = np.full((3, 3), 2**40, dtype=np.int64)
    c = exactla.mat_mul(a, a)
    assert c.dtype == object and c[0, 0] == 3 * 2**80
    small = np.arange(9).reshape(3, 3)
    assert exactla.mat_mul(small, small).dtype == np.int64


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_row_space_tracks_rank(rows):
    space = exactla.RowSpace(len(rows[0]))
    added = [space.add(r) for r in rows]
    assert space.rank == naive_rank(rows) == sum(added)
    for r in rows:
        assert space.contains(r)

"""
Tests for reduced systems
"""

import random

import pytest

from src.exact_matrix import RingMatrix, rref
from src.exceptions import DimensionError, InternalConsistencyError, RankOutOfScope
from src.reduce import ReducedSystem, normalize_content, reduce_matrix
from src.solve import nullspace_basis_direct, nullspace_basis_snf
from tests.helpers import random_matrix


def same_row_space(A, B):
    """Row spaces over the fraction field agree iff the stacked rank equals both ranks."""
    ra, rb = rref(A).rank, rref(B).rank
    return ra == rb == rref(A.vstack(B)).rank


@pytest.mark.unit
class TestReduceMatrix:
    """Reduction of coefficient matrices"""

    def test_pair_system(self, pair_matrix):
        rs = reduce_matrix(pair_matrix)
        assert (rs.rank, rs.f, rs.d) == (2, 2, 19)
        assert rs.K.tolist() == [[31, -1], [11, 26]]
        assert rs.sigma == (0, 1, 2, 3)
        assert rs.Z.tolist() == [[19, 0, 31, -1], [0, 19, 11, 26]]

    def test_vandermonde_system(self, vandermonde_matrix):
        rs = reduce_matrix(vandermonde_matrix)
        assert rs.d == 4
        assert rs.K.tolist() == [[-4, 0, 4], [9, 9, 9], [-1, -1, -1]]
        assert rs.sigma == tuple(range(6))

    def test_composite_system(self, composite_matrix):
        rs = reduce_matrix(composite_matrix)
        assert rs.d == 12
        assert rs.K.tolist() == [[1, 5, 6], [-1, -1, -2], [-1, 3, 14]]

    def test_saturated_system(self, saturated_matrix):
        rs = reduce_matrix(saturated_matrix)
        assert rs.d == 3
        assert rs.K.tolist() == [[1], [1]]

    def test_non_pivot_columns_move_last(self):
        A = RingMatrix([[0, 1, 2], [0, 2, 4]])
        rs = reduce_matrix(A)
        assert rs.sigma == (1, 0, 2)
        assert rs.pivot_columns == (1,)
        assert rs.free_columns == (0, 2)
        assert rs.d == 1
        assert rs.K.tolist() == [[0, 2]]
        assert rs.Z.tolist() == [[1, 0, 2], [0, 0, 0]]

    def test_padded_identity(self):
        rs = reduce_matrix(RingMatrix([[1, 0, 0], [0, 1, 0]]))
        assert rs.d == 1
        assert rs.K.is_zero()

    def test_row_space_preserved(self, pair_matrix, vandermonde_matrix, composite_matrix):
        for A in (pair_matrix, vandermonde_matrix, composite_matrix):
            rs = reduce_matrix(A)
            assert same_row_space(A @ rs.permutation_matrix(), rs.Z)

    def test_content_is_unit(self, composite_matrix):
        assert reduce_matrix(composite_matrix).content() == 1

    def test_zero_matrix(self):
        with pytest.raises(RankOutOfScope) as info:
            reduce_matrix(RingMatrix.zeros(2, 3))
        assert info.value.rank == 0
        assert info.value.trivial_basis == RingMatrix.identity(3)

    def test_full_rank(self):
        with pytest.raises(RankOutOfScope) as info:
            reduce_matrix(RingMatrix([[1, 2], [3, 4]]))
        assert info.value.rank == 2
        assert info.value.trivial_basis.shape == (2, 0)


@pytest.mark.unit
class TestReducedSystem:
    """Hand-built reduced systems and content normalisation"""

    def test_apply_sigma(self):
        A = RingMatrix([[0, 1, 2]])
        rs = ReducedSystem.from_parts(A, 1, RingMatrix([[0, 2]]), (1, 0, 2))
        assert rs.apply_sigma([10, 20, 30]) == [20, 10, 30]

    def test_from_parts_validation(self, pair_matrix):
        with pytest.raises(DimensionError):
            ReducedSystem.from_parts(pair_matrix, 19, RingMatrix([[1, 2, 3], [4, 5, 6]]), (0, 1, 2, 3))
        with pytest.raises(DimensionError):
            ReducedSystem.from_parts(pair_matrix, 19, RingMatrix([[31, -1], [11, 26]]), (0, 1, 1, 3))
        with pytest.raises(DimensionError):
            ReducedSystem.from_parts(pair_matrix, 0, RingMatrix([[31, -1], [11, 26]]), (0, 1, 2, 3))

    def test_normalize_content(self, pair_matrix):
        rs = ReducedSystem.from_parts(pair_matrix, 38, RingMatrix([[62, -2], [22, 52]]), (0, 1, 2, 3))
        assert rs.content() == 2
        normalized = normalize_content(rs)
        assert normalized.d == 19
        assert normalized.K.tolist() == [[31, -1], [11, 26]]
        with pytest.raises(InternalConsistencyError):
            normalize_content(rs, strict=True)

    def test_normalize_unit_content_unchanged(self, pair_matrix):
        rs = reduce_matrix(pair_matrix)
        assert normalize_content(rs) is rs


@pytest.mark.integration
class TestPermutedSolutions:
    """Solutions of A moved into pivot-first order solve J"""

    def test_random_systems(self):
        rng = random.Random(31)
        for _ in range(60):
            A = random_matrix(rng)
            rs = reduce_matrix(A)
            inverse = rs.permutation_matrix().T
            for basis in (nullspace_basis_direct(A)[0], nullspace_basis_snf(A)):
                S = basis.integral_columns()
                Y = inverse @ S
                assert (rs.J @ Y).is_zero()
                assert [rs.apply_sigma(y) for y in Y.columns()] == S.columns()

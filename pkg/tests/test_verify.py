"""
Tests for the independent oracles
"""

import random

import pytest

from src.exact_matrix import RingMatrix, det
from src.exceptions import BruteForceBoundExceeded, NotSublattice
from src.lattice import LatticeBasis, QuotientStructure, m_basis, quotient_S_over_M, u_basis
from src.reduce import reduce_matrix
from src.solve import nullspace_basis_direct, nullspace_basis_snf
from src.verify import (
    brute_force_kernel_structure,
    coefficient_matrix,
    is_solution,
    quotient_invariants_oracle,
    same_lattice,
)
from tests.helpers import random_unimodular

COMPOSITE_S = LatticeBasis.from_vectors([
    [-4, 1, -6, -1, 5, 4],
    [0, 0, -1, -1, -1, 1],
    [-5, 1, -3, 0, 12, 0],
])


@pytest.mark.unit
class TestIsSolution:
    """Exact solution checks"""

    def test_known_solution(self, composite_matrix):
        assert is_solution(composite_matrix, [0, 0, -1, -1, -1, 1])

    def test_unit_vector(self, pair_matrix):
        assert not is_solution(pair_matrix, [1, 0, 0, 0])

    def test_m_basis_columns(self, vandermonde_matrix):
        Mb = m_basis(reduce_matrix(vandermonde_matrix))
        assert all(is_solution(vandermonde_matrix, column) for column in Mb.columns.columns())


@pytest.mark.unit
class TestSameLattice:
    """Lattice equality through mutual integral solves"""

    def test_permuted_and_negated(self):
        B = LatticeBasis.from_vectors([[1, -26, 0, 19], [-1, -17, 1, 12]])
        C = LatticeBasis.from_vectors([[1, 17, -1, -12], [1, -26, 0, 19]])
        assert same_lattice(B, C)

    def test_unimodular_remix(self):
        rng = random.Random(3)
        B = COMPOSITE_S
        for _ in range(5):
            C = LatticeBasis(B.columns @ random_unimodular(rng, 3))
            assert same_lattice(B, C)
            assert same_lattice(C, B)

    def test_u_versus_m(self, composite_matrix):
        rs = reduce_matrix(composite_matrix)
        assert not same_lattice(u_basis(rs), m_basis(rs))

    def test_different_rank(self):
        assert not same_lattice(LatticeBasis.from_vectors([[1, 0, 0]]), LatticeBasis.from_vectors([[1, 0, 0], [0, 1, 0]]))

    def test_direct_versus_snf(self, pair_matrix):
        direct, _ = nullspace_basis_direct(pair_matrix)
        assert same_lattice(direct, nullspace_basis_snf(pair_matrix))


@pytest.mark.unit
class TestQuotientOracle:
    """Quotient structure from the coefficient matrix"""

    def test_composite_s_over_m(self, composite_matrix):
        Mb = m_basis(reduce_matrix(composite_matrix))
        assert quotient_invariants_oracle(Mb, COMPOSITE_S) == QuotientStructure((4, 12))

    def test_composite_u_over_s(self, composite_matrix):
        U = u_basis(reduce_matrix(composite_matrix))
        assert quotient_invariants_oracle(COMPOSITE_S, U) == QuotientStructure((3, 12))

    def test_same_basis(self):
        assert quotient_invariants_oracle(COMPOSITE_S, COMPOSITE_S).is_trivial

    def test_m_inside_u(self, vandermonde_matrix):
        rs = reduce_matrix(vandermonde_matrix)
        assert quotient_invariants_oracle(m_basis(rs), u_basis(rs)) == QuotientStructure((4, 4, 4))

    def test_wrong_order(self, composite_matrix):
        Mb = m_basis(reduce_matrix(composite_matrix))
        with pytest.raises(NotSublattice):
            quotient_invariants_oracle(COMPOSITE_S, Mb)

    def test_coefficient_matrix(self, composite_matrix):
        Mb = m_basis(reduce_matrix(composite_matrix))
        X = coefficient_matrix(Mb, COMPOSITE_S)
        assert COMPOSITE_S.columns @ X == Mb.columns

    def test_coefficient_determinant_is_index(self, vandermonde_matrix):
        Mb = m_basis(reduce_matrix(vandermonde_matrix))
        S = LatticeBasis.from_vectors([[1, 0, 0, 1, -1, 0], [1, 0, 0, 0, 1, -1], [-4, -9, 1, 0, 0, 4]])
        X = coefficient_matrix(Mb, S)
        assert S.columns @ X == Mb.columns
        assert abs(det(X)) == 16



@pytest.mark.unit
class TestBruteForce:
    """Enumeration of K*alpha = 0 modulo d"""

    def test_pair_system(self):
        result = brute_force_kernel_structure(RingMatrix([[31, -1], [11, 26]]), 19)
        assert result.structure == QuotientStructure((19,))
        assert result.cardinality == 19

    def test_vandermonde(self):
        result = brute_force_kernel_structure(RingMatrix([[-4, 0, 4], [9, 9, 9], [-1, -1, -1]]), 4)
        assert result.structure == QuotientStructure((4, 4))
        assert result.cardinality == 16

    def test_zero_matrix(self):
        result = brute_force_kernel_structure(RingMatrix.zeros(1, 2), 2)
        assert result.structure == QuotientStructure((2, 2))
        assert result.cardinality == 4

    def test_composite(self, composite_matrix):
        rs = reduce_matrix(composite_matrix)
        result = brute_force_kernel_structure(rs.K, rs.d)
        assert result.structure == quotient_S_over_M(rs)
        assert result.cardinality == 48

    def test_bound(self):
        with pytest.raises(BruteForceBoundExceeded):
            brute_force_kernel_structure(RingMatrix.zeros(1, 3), 19, bound=1000)

    def test_bound_from_environment(self, monkeypatch):
        monkeypatch.setenv("DIOPH_BRUTE_BOUND", "10")
        with pytest.raises(BruteForceBoundExceeded):
            brute_force_kernel_structure(RingMatrix.zeros(1, 2), 4)

    def test_unit_modulus(self):
        result = brute_force_kernel_structure(RingMatrix([[1, 2]]), 1)
        assert result.structure.is_trivial
        assert result.cardinality == 1

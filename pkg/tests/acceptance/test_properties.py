"""
Randomized agreement between the solvers, the structure formulas and the oracles
"""

import random

import hypothesis
import pytest
from hypothesis import strategies as st

from src.config import Settings
from src.exact_matrix import RingMatrix, is_unimodular, rank, rref_mod_p, smith_normal_form
from src.lattice import analyze, complementary_structure, m_basis, u_basis
from src.lift import LiftWay, lift_by_elementary_divisors, lift_by_invariant_factors, lift_prime_at_a_time
from src.reduce import reduce_matrix
from src.solve import nullspace_basis_direct, nullspace_basis_snf, prime_case_basis
from src.verify import brute_force_kernel_structure, is_solution, quotient_invariants_oracle, same_lattice
from tests.helpers import random_matrix, random_prime_d_matrix

SETTINGS = Settings(seed=0)
BRUTE_FORCE_LIMIT = 10**4


@st.composite
def small_systems(draw, max_rows=4, max_cols=5, bound=9):
    m = draw(st.integers(min_value=1, max_value=max_rows))
    n = draw(st.integers(min_value=2, max_value=max_cols))
    rows = draw(st.lists(
        st.lists(st.integers(min_value=-bound, max_value=bound), min_size=n, max_size=n),
        min_size=m,
        max_size=m,
    ))
    return RingMatrix(rows)


def assert_kills_j(rs, basis):
    """Every column, read in pivot-first order, must solve J*y = 0."""
    for column in basis.integral_columns().columns():
        permuted = [column[source] for source in rs.sigma]
        assert all(x == 0 for x in rs.J.apply(permuted))


def check_system(A):
    report = analyze(A)
    rs = report.system
    direct, _ = nullspace_basis_direct(A)
    snf = nullspace_basis_snf(A)

    assert all(is_solution(A, column) for column in direct.columns.columns())
    assert same_lattice(direct, snf)

    Mb, Ub = m_basis(rs), u_basis(rs)
    assert quotient_invariants_oracle(Mb, snf) == report.s_over_m
    assert quotient_invariants_oracle(snf, Ub) == report.u_over_s
    assert complementary_structure(report.s_over_m, rs.d, rs.f) == report.u_over_s
    assert report.index_s_over_m * report.index_u_over_s == rs.d ** rs.f

    q = report.s_over_m
    bases = [
        direct,
        snf,
        lift_by_invariant_factors(Mb, q, LiftWay.UNIMODULAR, SETTINGS, target=snf),
        lift_by_invariant_factors(Mb, q, LiftWay.EUCLIDEAN, SETTINGS, target=snf),
        lift_by_elementary_divisors(Mb, q.prime_powers(), SETTINGS, target=snf),
        lift_prime_at_a_time(Mb, q.index, SETTINGS, target=snf),
    ]
    if rs.ring.is_prime(rs.d):
        bases.append(prime_case_basis(rs))
    for basis in bases:
        assert same_lattice(basis, snf)
        assert_kills_j(rs, basis)

    if abs(rs.d) ** rs.f <= BRUTE_FORCE_LIMIT:
        result = brute_force_kernel_structure(rs.K, abs(rs.d), bound=BRUTE_FORCE_LIMIT)
        assert result.structure == report.s_over_m
        assert result.cardinality == report.index_s_over_m


@pytest.mark.slow
class TestRandomSystems:
    """Seeded random systems through every method"""

    def test_random_instances(self):
        rng = random.Random(2024)
        for _ in range(500):
            A = random_matrix(rng, low=-20, high=20, max_dim=6)
            check_system(A)

    def test_prime_d_rank_law(self):
        rng = random.Random(7)
        for _ in range(100):
            A = random_prime_d_matrix(rng, rows=rng.randint(1, 3), cols=rng.randint(3, 5))
            report = analyze(A)
            rs = report.system
            s = rref_mod_p(rs.K, rs.d).rank
            assert len(report.u_over_s) == s
            assert sum(1 for a in report.s_over_m if a == abs(rs.d)) == rs.f - s
            assert same_lattice(prime_case_basis(rs), nullspace_basis_snf(A))

    def test_smith_certificates(self):
        rng = random.Random(99)
        for _ in range(1000):
            m, n = rng.randint(1, 6), rng.randint(1, 6)
            A = RingMatrix([[rng.randint(-30, 30) if rng.random() < 0.8 else 0 for _ in range(n)] for _ in range(m)])
            snf = smith_normal_form(A)
            assert snf.reproduces(A)
            assert is_unimodular(snf.P) and is_unimodular(snf.Q)
            assert snf.rank == rank(A)
            factors = snf.invariant_factors
            assert all(x > 0 for x in factors)
            assert all(b % a == 0 for a, b in zip(factors, factors[1:]))
            assert all(x == 0 for x in snf.diagonal[snf.rank:])


@pytest.mark.slow
class TestHypothesisSystems:
    """Property checks on small generated systems"""

    @hypothesis.seed(1)
    @hypothesis.settings(max_examples=60, deadline=None)
    @hypothesis.given(A=small_systems())
    def test_solvers_agree(self, A):
        hypothesis.assume(0 < rank(A) < A.ncols)
        check_system(A)

    @hypothesis.settings(max_examples=100, deadline=None)
    @hypothesis.given(A=small_systems(max_rows=5, max_cols=5, bound=50))
    def test_m_basis_solves(self, A):
        hypothesis.assume(0 < rank(A) < A.ncols)
        rs = reduce_matrix(A)
        for column in m_basis(rs).columns.columns():
            assert is_solution(A, column)

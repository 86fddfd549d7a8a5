"""
Bases of the integral nullspace S of A.

Three independent routes:

    nullspace_basis_direct  solve the congruence K*alpha = 0 (mod d) through the
                            Smith form of K and pull the solutions back to S
    nullspace_basis_snf     the classical route through the Smith form of A
    prime_case_basis        when d = p is prime, read a basis off the echelon
                            form of K modulo p
"""

import logging
from dataclasses import dataclass
from typing import Tuple

from .exact_matrix import RingMatrix, det, rref_mod_p, smith_normal_form
from .exceptions import InternalConsistencyError, NotPrimeError, RankOutOfScope, RingDivisionError
from .lattice import LatticeBasis, m_basis
from .reduce import ReducedSystem, reduce_matrix
from .ring import RingElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CongruenceKernel:
    """Solutions of K*alpha = 0 (mod d) as a sublattice of R^f.

    Attributes:
        modulus: d
        coefficient_basis: f x f matrix whose columns generate the solutions
    """
    modulus: RingElement
    coefficient_basis: RingMatrix

    def index(self) -> RingElement:
        return self.coefficient_basis.ring.canonical(det(self.coefficient_basis))


def solve_congruence_kernel(K: RingMatrix, d: RingElement) -> CongruenceKernel:
    """All alpha with K*alpha = 0 (mod d).

    With D = P*K*Q the condition becomes q_i * beta_i = 0 (mod d) for
    beta = Q^-1 * alpha, i.e. d/gcd(d, q_i) divides beta_i for i <= t and
    beta_i is free beyond t. So alpha = Q * diag(d/gcd(d, q_i), ..., 1, ...).

    Args:
        K: r x f matrix
        d: Nonzero modulus

    Returns:
        CongruenceKernel with an f x f coefficient basis
    """
    ring = K.ring
    if ring.is_zero(d):
        raise RingDivisionError("congruence modulo zero")
    snf = smith_normal_form(K)
    scales = [ring.exact_div(ring.canonical(d), ring.gcd(d, q)) for q in snf.invariant_factors]
    scales += [ring.one] * (K.ncols - len(scales))
    return CongruenceKernel(ring.canonical(d), snf.Q @ RingMatrix.diagonal(scales, ring=ring))


def nullspace_basis_direct(A: RingMatrix) -> Tuple[LatticeBasis, ReducedSystem]:
    """Basis of S built from the reduced system and the congruence kernel.

    Each solution alpha of K*alpha = 0 (mod d) gives the vector
    sum(alpha_i * Sigma*V(i)) = (M-basis * alpha) / d, where the division is
    exact.

    Raises:
        RankOutOfScope: If rank(A) is 0 or n
        InternalConsistencyError: If a division is inexact or a vector fails A*x = 0
    """
    rs = reduce_matrix(A)
    kernel = solve_congruence_kernel(rs.K, rs.d)
    numerators = m_basis(rs).columns @ kernel.coefficient_basis
    try:
        columns = numerators.exact_div(rs.d)
    except RingDivisionError as exc:
        raise InternalConsistencyError(f"congruence solution not divisible by d = {rs.d}") from exc
    if not (A @ columns).is_zero():
        raise InternalConsistencyError("direct nullspace basis does not solve A*x = 0")
    logger.debug("direct method: index of S in U is %s", kernel.index())
    return LatticeBasis(columns), rs


def nullspace_basis_snf(A: RingMatrix) -> LatticeBasis:
    """Basis of S from the Smith form D = P*A*Q: Q times the last f unit vectors.

    Raises:
        RankOutOfScope: If rank(A) is 0 or n
    """
    snf = smith_normal_form(A)
    n = A.ncols
    r = snf.rank
    if r == 0:
        raise RankOutOfScope(0, n, RingMatrix.identity(n, A.ring))
    if r == n:
        raise RankOutOfScope(n, n, RingMatrix.zeros(n, 0, A.ring))
    return LatticeBasis(snf.Q.take_columns(range(r, n)))


def prime_case_coefficients(rs: ReducedSystem) -> Tuple[RingMatrix, int]:
    """Coordinates of the prime-case basis relative to V(1), ..., V(f).

    With H the echelon form of K modulo p and leading columns l_1 < ... < l_s:
    z = p*V(l_k) for each leading column, and z = V(c) - sum_k H[k, c]*V(l_k)
    for every other column c. The leading columns play the role of 1..s after
    relabelling; the relabelling is undone by placing each vector at its own
    column index.

    Returns:
        (G, s) with G the f x f coefficient matrix, det G = p^s up to units

    Raises:
        NotPrimeError: If d is not prime
    """
    ring = rs.ring
    p = rs.d
    try:
        echelon = rref_mod_p(rs.K, p)
    except NotPrimeError:
        raise NotPrimeError(f"d = {p} is not prime, use the direct method or a lift instead") from None
    H = echelon.matrix
    G = RingMatrix.zeros(rs.f, rs.f, ring).to_array()
    for lead in echelon.leading_columns:
        G[lead, lead] = p
    leading = set(echelon.leading_columns)
    for c in range(rs.f):
        if c in leading:
            continue
        G[c, c] = ring.one
        for k, lead in enumerate(echelon.leading_columns):
            G[lead, c] = -H[k, c]
    return RingMatrix(G, ring), echelon.rank


def prime_case_basis(rs: ReducedSystem) -> LatticeBasis:
    """Integral basis of S for a reduced system whose d is prime.

    Raises:
        NotPrimeError: If d is not prime
        InternalConsistencyError: If a basis vector is not integral
    """
    G, s = prime_case_coefficients(rs)
    try:
        columns = (m_basis(rs).columns @ G).exact_div(rs.d)
    except RingDivisionError as exc:
        raise InternalConsistencyError("prime-case vector is not integral") from exc
    logger.debug("prime case: p = %s, rank of K mod p = %d", rs.d, s)
    return LatticeBasis(columns)

"""
Reduced matrices associated to a coefficient matrix.

A matrix Z of rank r is reduced when it has the block form

    Z = ( d*I_r  K )
        (   0    0 )

Every A of rank 0 < r < n is associated to one: some L invertible over the
fraction field and a column permutation Sigma give L*A*Sigma = Z. The reduced
system is built from the reduced row echelon form E of A: pivot columns move
to the front, d is the least common denominator of E, and K = d * (non-pivot
block of E).
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .exact_matrix import RingMatrix, rref
from .exceptions import DimensionError, InternalConsistencyError, RankOutOfScope
from .ring import EuclideanRing, RingElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReducedSystem:
    """The data (Z, d, K, Sigma, r, f) of a reduced matrix associated to A.

    Attributes:
        A: The original coefficient matrix (m x n)
        rank: r, the rank of A
        f: n - r, the rank of the nullspace lattice
        d: Nonzero canonical scalar of the d*I_r block
        K: r x f block
        sigma: sigma[k] is the original column placed at position k (0-based)
        Z: m x n reduced matrix, (d*I_r | K) over m - r zero rows
        J: r x n matrix (d*I_r | K)
    """
    A: RingMatrix
    rank: int
    f: int
    d: RingElement
    K: RingMatrix
    sigma: Tuple[int, ...]
    Z: RingMatrix
    J: RingMatrix

    @classmethod
    def from_parts(cls, A: RingMatrix, d: RingElement, K: RingMatrix, sigma: Sequence[int]) -> "ReducedSystem":
        """Assemble a reduced system from its blocks.

        Raises:
            DimensionError: If the blocks do not fit A or sigma is not a permutation
        """
        ring = A.ring
        r, f = K.shape
        n = r + f
        if A.ncols != n:
            raise DimensionError(f"K of shape {K.shape} does not fit a matrix with {A.ncols} columns")
        if A.nrows < r:
            raise DimensionError(f"rank {r} exceeds the {A.nrows} rows of A")
        if sorted(sigma) != list(range(n)):
            raise DimensionError(f"{tuple(sigma)} is not a permutation of 0..{n - 1}")
        if ring.is_zero(d):
            raise DimensionError("d must be nonzero")
        J = RingMatrix.identity(r, ring).scale(d).hstack(K)
        Z = J.vstack(RingMatrix.zeros(A.nrows - r, n, ring)) if A.nrows > r else J
        return cls(A=A, rank=r, f=f, d=d, K=K, sigma=tuple(sigma), Z=Z, J=J)

    def __post_init__(self) -> None:
        if not 0 < self.rank < self.rank + self.f:
            raise RankOutOfScope(self.rank, self.rank + self.f)

    @property
    def ring(self) -> EuclideanRing:
        return self.A.ring

    @property
    def n(self) -> int:
        return self.rank + self.f

    @property
    def m(self) -> int:
        return self.A.nrows

    @property
    def pivot_columns(self) -> Tuple[int, ...]:
        return self.sigma[: self.rank]

    @property
    def free_columns(self) -> Tuple[int, ...]:
        return self.sigma[self.rank:]

    def permutation_matrix(self) -> RingMatrix:
        """Sigma as a matrix, so that A*Sigma has the pivot columns first."""
        return RingMatrix.permutation(self.sigma, self.ring)

    def apply_sigma(self, x: Sequence[RingElement]) -> List[RingElement]:
        """Map a vector in permuted coordinates back to the original variable order."""
        out: List[RingElement] = [self.ring.zero] * self.n
        for k, source in enumerate(self.sigma):
            out[source] = x[k]
        return out

    def content(self) -> RingElement:
        """gcd of d together with every entry of K."""
        return self.ring.gcd_of_list([self.d, *self.K.entries()])


def reduce_matrix(A: RingMatrix) -> ReducedSystem:
    """Construct the reduced system associated to A.

    d is the least common multiple of the denominators of the reduced row
    echelon form, so no proper divisor of d clears them and the content of
    (d, K) is a unit.

    Args:
        A: Coefficient matrix over a Euclidean ring

    Returns:
        ReducedSystem with canonical d

    Raises:
        RankOutOfScope: If rank(A) is 0 or n; carries the trivial nullspace basis
        InternalConsistencyError: If the content of (d, K) is not a unit
    """
    ring = A.ring
    n = A.ncols
    echelon = rref(A)
    r = echelon.rank
    if r == 0:
        raise RankOutOfScope(0, n, RingMatrix.identity(n, ring))
    if r == n:
        raise RankOutOfScope(n, n, RingMatrix.zeros(n, 0, ring))
    free = [j for j in range(n) if j not in echelon.pivots]
    block = echelon.matrix.take_columns(free)
    d = ring.canonical(block.common_denominator())
    K = block.scaled(d).take_rows(range(r))
    rs = ReducedSystem.from_parts(A, d, K, echelon.pivots + tuple(free))
    if not ring.is_unit(rs.content()):
        raise InternalConsistencyError(f"reduced system has non-unit content {rs.content()}")
    logger.debug("reduced %dx%d matrix: rank %d, d = %s, sigma = %s", A.nrows, n, r, d, rs.sigma)
    return rs


def normalize_content(rs: ReducedSystem, strict: bool = False) -> ReducedSystem:
    """Divide d and K by the content g = gcd(d, K_ij).

    Systems coming from reduce_matrix already have unit content and are
    returned unchanged.

    Args:
        rs: Reduced system, possibly hand-built
        strict: Treat non-unit content as a bug instead of dividing it out

    Returns:
        A reduced system with unit content

    Raises:
        InternalConsistencyError: If strict and the content is not a unit
    """
    ring = rs.ring
    g = rs.content()
    if ring.is_unit(g):
        return rs
    if strict:
        raise InternalConsistencyError(f"content {g} of reduced system is not a unit")
    logger.warning("dividing reduced system by its content %s", g)
    return ReducedSystem.from_parts(rs.A, ring.exact_div(rs.d, g), rs.K.exact_div(g), rs.sigma)

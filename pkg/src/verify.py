"""
Independent checks for everything the solver produces.

These routines deliberately avoid the reduced-system machinery: lattice
comparisons go through solve_integral and a Smith form of the coefficient
matrix, and the brute-force oracle enumerates residue vectors outright.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import load_settings
from .exact_matrix import RingMatrix, smith_normal_form, solve_integral
from .exceptions import (
    BruteForceBoundExceeded,
    InternalConsistencyError,
    InvalidArgument,
    NoIntegralSolution,
    NotSublattice,
    UnsupportedOperation,
)
from .lattice import LatticeBasis, QuotientStructure, invariant_factors_from_elementary_divisors
from .ring import IntegerRing, RingElement

logger = logging.getLogger(__name__)


def is_solution(A: RingMatrix, v: Sequence[RingElement]) -> bool:
    """True iff A*v = 0 exactly."""
    return all(A.ring.is_zero(x) for x in A.apply(v))


def _common_numerators(B1: LatticeBasis, B2: LatticeBasis) -> Tuple[RingMatrix, RingMatrix]:
    common = B1.ring.lcm(B1.denominator, B2.denominator)
    return B1.numerators_over(common), B2.numerators_over(common)


def coefficient_matrix(Bsub: LatticeBasis, Bsup: LatticeBasis) -> RingMatrix:
    """X with Bsub = Bsup * X.

    Raises:
        NotSublattice: If the ranks differ or some vector of Bsub is not an
            integral combination of Bsup
    """
    if Bsub.n != Bsup.n or Bsub.f != Bsup.f:
        raise NotSublattice(f"bases of rank {Bsub.f} in dimension {Bsub.n} and rank {Bsup.f} in dimension {Bsup.n}")
    sub, sup = _common_numerators(Bsub, Bsup)
    try:
        return solve_integral(sup, sub)
    except NoIntegralSolution as exc:
        raise NotSublattice("first lattice is not contained in the second") from exc


def same_lattice(B1: LatticeBasis, B2: LatticeBasis) -> bool:
    """True iff both bases span the same lattice, i.e. each lies inside the other."""
    try:
        coefficient_matrix(B1, B2)
        coefficient_matrix(B2, B1)
    except NotSublattice:
        return False
    return True


def quotient_invariants_oracle(Bsub: LatticeBasis, Bsup: LatticeBasis) -> QuotientStructure:
    """Invariant factors of sup/sub, from the Smith form of the coefficient matrix.

    Raises:
        NotSublattice: If Bsub does not span a sublattice of Bsup
    """
    X = coefficient_matrix(Bsub, Bsup)
    return QuotientStructure.from_diagonal(smith_normal_form(X).diagonal, Bsub.ring)


@dataclass(frozen=True)
class BruteForceResult:
    """The kernel group {alpha in (Z/d)^f : K*alpha = 0 (mod d)}.

    Attributes:
        structure: Invariant factors of the group
        cardinality: Number of residue vectors found
    """
    structure: QuotientStructure
    cardinality: int


def _log_exact(value: int, base: int) -> int:
    exponent = 0
    while value > 1:
        value, r = divmod(value, base)
        if r:
            raise InternalConsistencyError(f"subgroup order is not a power of {base}")
        exponent += 1
    return exponent


def brute_force_kernel_structure(K: RingMatrix, d: int, bound: Optional[int] = None) -> BruteForceResult:
    """Enumerate the solutions of K*alpha = 0 modulo d and read off their group structure.

    The structure comes from counting the elements killed by p^k for each
    prime power dividing d: |G[p^k]| = p^(sum_i min(k, e_i)), so successive
    count ratios give the number of p-parts of exponent at least k.

    Args:
        K: Integer r x f matrix
        d: Positive modulus
        bound: Largest d**f to enumerate, defaults to DIOPH_BRUTE_BOUND

    Returns:
        BruteForceResult with the structure and cardinality

    Raises:
        UnsupportedOperation: If K is not an integer matrix
        BruteForceBoundExceeded: If d**f exceeds the bound
    """
    ring = K.ring
    if not isinstance(ring, IntegerRing):
        raise UnsupportedOperation("brute-force enumeration needs an integer matrix")
    d = abs(int(d))
    if d == 0:
        raise InvalidArgument("modulus must be nonzero")
    f = K.ncols
    bound = load_settings().brute_force_bound if bound is None else bound
    if d**f > bound:
        raise BruteForceBoundExceeded(f"{d}**{f} residue vectors exceed the bound {bound}")
    if f == 0 or d == 1:
        return BruteForceResult(QuotientStructure((), ring), 1)

    reduced = np.array([[x % d for x in row] for row in K.rows()], dtype=np.int64).reshape(K.nrows, f)
    alphas = np.indices((d,) * f, dtype=np.int64).reshape(f, -1)
    kernel = alphas[:, np.all((reduced @ alphas) % d == 0, axis=0)]
    cardinality = int(kernel.shape[1])
    logger.debug("brute force: %d of %d residue vectors solve K*alpha = 0 mod %d", cardinality, alphas.shape[1], d)

    divisors: List[Tuple[int, int]] = []
    for p, e in ring.factorize(d):
        logs = [0]
        for k in range(1, e + 1):
            killed = int(np.all((p**k * kernel) % d == 0, axis=0).sum())
            logs.append(_log_exact(killed, p))
        at_least = [logs[k] - logs[k - 1] for k in range(1, e + 1)] + [0]
        for k in range(1, e + 1):
            divisors.extend([(p, k)] * (at_least[k - 1] - at_least[k]))
    structure = invariant_factors_from_elementary_divisors(divisors, ring)
    if structure.index != cardinality:
        raise InternalConsistencyError(f"structure {structure} does not account for {cardinality} solutions")
    return BruteForceResult(structure, cardinality)

"""
The lattice chain M = dU, S, U attached to a reduced system, and the module
structure of the quotients S/M and U/S.

With V(1), ..., V(f) the fraction-field basis of the nullspace of J read off
from (d*I_r | K), U is the span of Sigma*V(i) and M = dU. Then M is inside S,
S is inside U, and with q_1 | ... | q_t the nonzero Smith invariants of K:

    S/M = R/gcd(d, q_1) + ... + R/gcd(d, q_t) + (R/d)^(f - t)
    U/S = R/(d/gcd(d, q_t)) + ... + R/(d/gcd(d, q_1))
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .exact_matrix import RingMatrix, SmithDecomposition, rank, smith_normal_form
from .exceptions import DimensionError, InternalConsistencyError, InvalidArgument
from .reduce import ReducedSystem, reduce_matrix
from .ring import ZZ, EuclideanRing, RingElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LatticeBasis:
    """A lattice of rank f in the ambient module of dimension n.

    The actual basis vectors are the columns of ``columns`` divided by
    ``denominator``; for integral lattices the denominator is 1.

    Attributes:
        columns: n x f matrix of numerators, full column rank
        denominator: Common denominator of the basis vectors
    """
    columns: RingMatrix
    denominator: Any = 1

    def __post_init__(self) -> None:
        ring = self.columns.ring
        denominator = ring.coerce(self.denominator)
        if ring.is_zero(denominator):
            raise DimensionError("lattice denominator must be nonzero")
        object.__setattr__(self, "denominator", denominator)
        if self.columns.ncols and rank(self.columns) != self.columns.ncols:
            raise DimensionError(f"basis columns of shape {self.columns.shape} are not independent")

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[RingElement]], n: Optional[int] = None,
                     ring: EuclideanRing = ZZ) -> "LatticeBasis":
        return cls(RingMatrix.from_columns(vectors, n, ring))

    @property
    def ring(self) -> EuclideanRing:
        return self.columns.ring

    @property
    def n(self) -> int:
        return self.columns.nrows

    @property
    def f(self) -> int:
        return self.columns.ncols

    @property
    def is_integral(self) -> bool:
        return self.ring.is_unit(self.denominator)

    def vectors(self) -> List[List[Any]]:
        """Basis vectors as fraction-field entries."""
        ring = self.ring
        return [[ring.fraction(x, self.denominator) for x in column] for column in self.columns.columns()]

    def numerators_over(self, common: RingElement) -> RingMatrix:
        """Numerator matrix of this basis written over the denominator ``common``.

        Raises:
            RingDivisionError: If the denominator does not divide common
        """
        return self.columns.scale(self.ring.exact_div(common, self.denominator))

    def integral_columns(self) -> RingMatrix:
        """The basis vectors themselves, which must be integral."""
        return self.columns.exact_div(self.denominator)


@dataclass(frozen=True)
class QuotientStructure:
    """Invariant factors g_1 | ... | g_s of a finite-length quotient of lattices.

    Units are dropped, so the trivial quotient is the empty sequence.

    Attributes:
        invariant_factors: Canonical non-unit, nonzero chain in divisibility order
        ring: The ring the factors belong to
    """
    invariant_factors: Tuple[RingElement, ...] = ()
    ring: EuclideanRing = field(default=ZZ, compare=False)

    def __post_init__(self) -> None:
        factors = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        for g in factors:
            if self.ring.is_zero(g) or self.ring.is_unit(g) or self.ring.canonical(g) != g:
                raise InvalidArgument(f"invariant factor {g} must be canonical, nonzero and not a unit")
        for a, b in zip(factors, factors[1:]):
            if not self.ring.divides(a, b):
                raise InvalidArgument(f"invariant factors {factors} do not form a divisibility chain")

    @classmethod
    def from_diagonal(cls, entries: Iterable[RingElement], ring: EuclideanRing = ZZ) -> "QuotientStructure":
        """Normalise the diagonal of any diagonal relation matrix.

        Entries are canonicalised, units dropped and the chain restored,
        through a Smith form when the sorted entries do not already divide
        one another.

        Raises:
            InvalidArgument: If an entry is zero (the quotient would not have finite length)
        """
        values = [ring.canonical(ring.coerce(x)) for x in entries]
        if any(ring.is_zero(x) for x in values):
            raise InvalidArgument("a zero invariant factor describes a quotient of infinite length")
        values = sorted((x for x in values if not ring.is_unit(x)), key=ring.delta)
        if any(not ring.divides(a, b) for a, b in zip(values, values[1:])):
            values = [x for x in smith_normal_form(RingMatrix.diagonal(values, ring=ring)).diagonal if not ring.is_unit(x)]
        return cls(tuple(values), ring)

    def __len__(self) -> int:
        return len(self.invariant_factors)

    def __iter__(self):
        return iter(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def index(self) -> RingElement:
        result = self.ring.one
        for g in self.invariant_factors:
            result = result * g
        return result

    @property
    def largest(self) -> Optional[RingElement]:
        return self.invariant_factors[-1] if self.invariant_factors else None

    def without_largest(self) -> "QuotientStructure":
        return QuotientStructure(self.invariant_factors[:-1], self.ring)

    def elementary_divisors(self) -> Tuple[Tuple[Tuple[RingElement, int], ...], ...]:
        """Prime powers (p, e) of each invariant factor, one group per factor."""
        return tuple(tuple(self.ring.factorize(g)) for g in self.invariant_factors)

    def prime_powers(self) -> List[Tuple[RingElement, int]]:
        """The elementary divisors as one flat list, ordered by prime then exponent."""
        flat = [pair for group in self.elementary_divisors() for pair in group]
        return sorted(flat, key=lambda pe: (self.ring.delta(pe[0]), pe[1]))

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "trivial"
        return " + ".join(f"{self.ring.name}/{g}" for g in self.invariant_factors)


def index(q: QuotientStructure) -> RingElement:
    return q.index


def elementary_divisors(q: QuotientStructure) -> Tuple[Tuple[Tuple[RingElement, int], ...], ...]:
    return q.elementary_divisors()


def invariant_factors_from_elementary_divisors(prime_powers: Iterable[Tuple[RingElement, int]],
                                               ring: EuclideanRing = ZZ) -> QuotientStructure:
    """Regroup elementary divisors p^e into the invariant-factor chain."""
    by_prime: Dict[Any, List[int]] = {}
    for p, e in prime_powers:
        by_prime.setdefault(ring.canonical(p), []).append(e)
    length = max((len(exps) for exps in by_prime.values()), default=0)
    factors = [ring.one] * length
    for p, exps in by_prime.items():
        for k, e in enumerate(sorted(exps, reverse=True)):
            factors[length - 1 - k] = factors[length - 1 - k] * p**e
    return QuotientStructure.from_diagonal(factors, ring)


def _free_coordinates(rs: ReducedSystem, i: int) -> List[RingElement]:
    ring = rs.ring
    head = [-rs.K[k, i] for k in range(rs.rank)]
    tail = [rs.d if j == i else ring.zero for j in range(rs.f)]
    return rs.apply_sigma(head + tail)


def m_basis(rs: ReducedSystem) -> LatticeBasis:
    """Integral basis Sigma*d*V(1), ..., Sigma*d*V(f) of M."""
    columns = [_free_coordinates(rs, i) for i in range(rs.f)]
    return LatticeBasis(RingMatrix.from_columns(columns, rs.n, rs.ring), rs.ring.one)


def u_basis(rs: ReducedSystem) -> LatticeBasis:
    """Basis Sigma*V(1), ..., Sigma*V(f) of U, stored as the M numerators over d."""
    return LatticeBasis(m_basis(rs).columns, rs.d)


def smith_of_k(rs: ReducedSystem) -> SmithDecomposition:
    return smith_normal_form(rs.K)


def quotient_S_over_M(rs: ReducedSystem, snf: Optional[SmithDecomposition] = None) -> QuotientStructure:
    """Invariant factors of S/M: gcd(d, q_i) for i <= t, then d repeated f - t times."""
    ring = rs.ring
    q = (snf or smith_of_k(rs)).invariant_factors
    factors = [ring.gcd(rs.d, qi) for qi in q] + [rs.d] * (rs.f - len(q))
    return QuotientStructure.from_diagonal(factors, ring)


def quotient_U_over_S(rs: ReducedSystem, snf: Optional[SmithDecomposition] = None) -> QuotientStructure:
    """Invariant factors of U/S: d/gcd(d, q_i), which equal lcm(d, q_i)/q_i.

    Raises:
        InternalConsistencyError: If the two expressions disagree
    """
    ring = rs.ring
    q = (snf or smith_of_k(rs)).invariant_factors
    factors = []
    for qi in q:
        d_i = ring.exact_div(rs.d, ring.gcd(rs.d, qi))
        m_i = ring.exact_div(ring.lcm(rs.d, qi), ring.canonical(qi))
        if not ring.associates(d_i, m_i):
            raise InternalConsistencyError(f"d/gcd(d, q) = {d_i} but lcm(d, q)/q = {m_i} for q = {qi}")
        factors.append(d_i)
    return QuotientStructure.from_diagonal(factors, ring)


def complementary_structure(q: QuotientStructure, d: RingElement, f: int) -> QuotientStructure:
    """Structure of the complementary quotient inside W/dW = (R/d)^f.

    Pads q with units to length f and maps each factor a to d/a.

    Raises:
        DimensionError: If q has more than f factors
        InvalidArgument: If some factor does not divide d
    """
    ring = q.ring
    if len(q) > f:
        raise DimensionError(f"{len(q)} invariant factors cannot fit in rank {f}")
    for a in q:
        if not ring.divides(a, d):
            raise InvalidArgument(f"invariant factor {a} does not divide {d}")
    padded = [ring.one] * (f - len(q)) + list(q)
    return QuotientStructure.from_diagonal((ring.exact_div(d, a) for a in padded), ring)


@dataclass(frozen=True)
class StructureFlags:
    """Which inclusions in M, S, U are equalities."""
    u_equals_s: bool
    s_equals_m: bool


def classify(rs: ReducedSystem, snf: Optional[SmithDecomposition] = None) -> StructureFlags:
    """U = S iff d divides every entry of K; S = M iff every gcd(d, q_i) is a
    unit and either d is a unit or K has rank f."""
    ring = rs.ring
    q = (snf or smith_of_k(rs)).invariant_factors
    u_equals_s = all(ring.divides(rs.d, x) for x in rs.K.entries())
    s_equals_m = all(ring.is_unit(ring.gcd(rs.d, qi)) for qi in q) and (ring.is_unit(rs.d) or len(q) == rs.f)
    return StructureFlags(u_equals_s=u_equals_s, s_equals_m=s_equals_m)


@dataclass(frozen=True)
class StructureReport:
    """Everything known about the chain M, S, U of one coefficient matrix."""
    system: ReducedSystem
    snf_k: SmithDecomposition
    s_over_m: QuotientStructure
    u_over_s: QuotientStructure
    flags: StructureFlags

    @property
    def index_s_over_m(self) -> RingElement:
        return self.s_over_m.index

    @property
    def index_u_over_s(self) -> RingElement:
        return self.u_over_s.index


def analyze(A: RingMatrix) -> StructureReport:
    """Reduce A and compute both quotient structures and the equality flags.

    Raises:
        RankOutOfScope: If rank(A) is 0 or n
    """
    rs = reduce_matrix(A)
    snf = smith_of_k(rs)
    report = StructureReport(
        system=rs,
        snf_k=snf,
        s_over_m=quotient_S_over_M(rs, snf),
        u_over_s=quotient_U_over_S(rs, snf),
        flags=classify(rs, snf),
    )
    logger.info("S/M = %s, U/S = %s", report.s_over_m, report.u_over_s)
    return report

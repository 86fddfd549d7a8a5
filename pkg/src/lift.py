"""
Growing a basis of a sublattice M into a basis of a lattice L containing it.

L is taken to be the saturation of M: the integral points of the span of M.
That covers the nullspace lattice S over M = dU, and it means a vector
(sum a_i u_i)/g belongs to L exactly when the division is exact.

Three procedures, each advancing by one cyclic summand of L/M at a time:

    lift_by_invariant_factors    one invariant factor per step, largest first,
                                 rebuilding the basis either by unimodular
                                 completion of the relation or by Euclidean
                                 reduction of it
    lift_by_elementary_divisors  one p-elementary divisor per step, with the
                                 single-vector swap
    lift_prime_at_a_time         one prime of the index per step
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import Settings, load_settings
from .exact_matrix import RingMatrix, inverse_unimodular
from .exceptions import (
    InternalConsistencyError,
    InvalidArgument,
    NotLargestFactor,
    NotUnimodularRelation,
    RingDivisionError,
    UnsupportedOperation,
)
from .lattice import LatticeBasis, QuotientStructure, invariant_factors_from_elementary_divisors
from .ring import ZZ, EuclideanRing, RingElement
from .solve import solve_congruence_kernel
from .verify import quotient_invariants_oracle

logger = logging.getLogger(__name__)


class LiftMethod(Enum):
    """How a step rebuilt the basis."""
    UNIMODULAR_COMPLETION = "unimodular_completion"
    EUCLIDEAN_REDUCTION = "euclidean_reduction"
    INTRO_PRIME = "intro_prime"


class LiftWay(Enum):
    """The two ways of turning the relation a_1 u_1 + ... - g v = 0 into a basis."""
    UNIMODULAR = "unimodular"
    EUCLIDEAN = "euclidean"


_METHOD_FOR_WAY = {
    LiftWay.UNIMODULAR: LiftMethod.UNIMODULAR_COMPLETION,
    LiftWay.EUCLIDEAN: LiftMethod.EUCLIDEAN_REDUCTION,
}


@dataclass(frozen=True)
class LiftStep:
    """One enlargement P = Rv + M of the current lattice.

    Attributes:
        incoming_basis: Basis of M
        coefficients: a, with v = (sum a_i u_i)/modulus
        modulus: g, the annihilator of v modulo M
        outgoing_basis: Basis of P, with P/M cyclic of order g
        method: How the outgoing basis was produced
    """
    incoming_basis: LatticeBasis
    coefficients: Tuple[RingElement, ...]
    modulus: RingElement
    outgoing_basis: LatticeBasis
    method: LiftMethod


def _is_primitive(a: Sequence[RingElement], g: RingElement, ring: EuclideanRing) -> bool:
    return ring.is_unit(ring.gcd_of_list([*a, g]))


def _crt_candidate(kernel: RingMatrix, g: RingElement, ring: EuclideanRing) -> Optional[List[RingElement]]:
    """Combine one kernel column per prime of g into a vector primitive modulo g."""
    try:
        primes = [p for p, _ in ring.factorize(g)]
    except UnsupportedOperation:
        return None
    radical = ring.one
    for p in primes:
        radical = radical * p
    combined = [ring.zero] * kernel.nrows
    for p in primes:
        column = next((c for c in kernel.columns() if any(not ring.divides(p, x) for x in c)), None)
        if column is None:
            return None
        cofactor = ring.exact_div(radical, p)
        weight = cofactor * ring.inverse_mod(cofactor, p)
        combined = [x + weight * y for x, y in zip(combined, column)]
    return combined


def _candidates(kernel: RingMatrix, g: RingElement, settings: Settings) -> Iterator[Tuple[str, List[RingElement]]]:
    ring = kernel.ring
    columns = kernel.columns()
    for column in columns:
        yield "kernel column", column
    for i in range(len(columns)):
        for j in range(i + 1, len(columns)):
            yield "pairwise sum", [x + y for x, y in zip(columns[i], columns[j])]
    rng = random.Random(settings.seed)
    for _ in range(settings.search_attempts):
        weights = [rng.choice((-1, 0, 1)) for _ in columns]
        combo = [ring.zero] * kernel.nrows
        for w, column in zip(weights, columns):
            if w:
                combo = [x + ring.coerce(w) * y for x, y in zip(combo, column)]
        yield "random combination", combo
    crt = _crt_candidate(kernel, g, ring)
    if crt is not None:
        yield "crt combination", crt


def find_order_vector(Mb: LatticeBasis, g: RingElement, settings: Optional[Settings] = None) -> Tuple[RingElement, ...]:
    """Coefficients a with (sum a_i u_i)/g integral and gcd(a_1, ..., a_f, g) a unit.

    The second condition says hv is outside M for every proper factor h of g.
    Candidates are drawn from the solutions of M*a = 0 (mod g): the kernel
    basis columns, their pairwise sums, seeded random combinations, and
    finally a CRT combination. Entries are returned as balanced residues
    modulo g.

    Args:
        Mb: Integral basis u_1, ..., u_f of M
        g: Non-unit modulus, the largest invariant factor of L/M
        settings: Seed and attempt count for the randomised layer

    Returns:
        The coefficient tuple a

    Raises:
        InvalidArgument: If g is zero or a unit
        NotLargestFactor: If no candidate qualifies
    """
    ring = Mb.ring
    if ring.is_zero(g) or ring.is_unit(g):
        raise InvalidArgument(f"modulus {g} must be a nonzero non-unit")
    settings = settings or load_settings()
    kernel = solve_congruence_kernel(Mb.integral_columns(), g).coefficient_basis
    for layer, candidate in _candidates(kernel, g, settings):
        if _is_primitive(candidate, g, ring):
            if layer in ("random combination", "crt combination"):
                logger.warning("order-%s vector found only by %s", g, layer)
            else:
                logger.debug("order-%s vector found as %s", g, layer)
            return tuple(ring.div_rem(x, g)[1] for x in candidate)
    raise NotLargestFactor(f"no vector of order {g} over the given lattice; {g} is not its largest invariant factor")


def complete_relation_unimodular(a: Sequence[RingElement], ring: EuclideanRing = ZZ) -> RingMatrix:
    """Unimodular Q with a*Q = (1, 0, ..., 0).

    Column 0 absorbs each later column by a 2 x 2 extended-gcd transform of
    determinant 1; the final unit is then scaled away.

    Raises:
        NotUnimodularRelation: If the entries of a do not generate the unit ideal
    """
    k = len(a)
    if k == 0 or not ring.is_unit(ring.gcd_of_list(a)):
        raise NotUnimodularRelation(f"gcd of {tuple(a)} is not a unit")
    Q = RingMatrix.identity(k, ring).to_array()
    w = [ring.coerce(x) for x in a]
    for j in range(1, k):
        if ring.is_zero(w[j]):
            continue
        g, x, y = ring.ext_gcd(w[0], w[j])
        s, t = ring.exact_div(w[0], g), ring.exact_div(w[j], g)
        left, right = Q[:, 0].copy(), Q[:, j].copy()
        Q[:, 0] = x * left + y * right
        Q[:, j] = -t * left + s * right
        w[0], w[j] = g, ring.zero
    if w[0] != ring.one:
        Q[:, 0] = ring.unit_inverse(w[0]) * Q[:, 0]
    return RingMatrix(Q, ring)


def _rebuild_unimodular(generators: RingMatrix, relation: Sequence[RingElement]) -> RingMatrix:
    ring = generators.ring
    Q = complete_relation_unimodular(relation, ring)
    transformed = generators @ inverse_unimodular(Q).transpose()
    if not transformed.take_columns([0]).is_zero():
        raise InternalConsistencyError("first transformed generator is not zero")
    return transformed.take_columns(range(1, generators.ncols))


def _rebuild_euclidean(generators: RingMatrix, relation: Sequence[RingElement]) -> RingMatrix:
    ring = generators.ring
    G = generators.to_array()
    c = list(relation)
    while True:
        nonzero = [j for j, cj in enumerate(c) if not ring.is_zero(cj)]
        i = min(nonzero, key=lambda j: (ring.delta(c[j]), j))
        reduced = False
        for j in nonzero:
            if j == i:
                continue
            q, r = ring.div_rem(c[j], c[i])
            c[j] = r
            G[:, i] = G[:, i] + q * G[:, j]
            reduced = reduced or not ring.is_zero(r)
        if not reduced:
            break
    if not ring.is_unit(c[i]):
        raise InternalConsistencyError(f"Euclidean reduction ended on non-unit coefficient {c[i]}")
    if any(not ring.is_zero(x) for x in G[:, i]):
        raise InternalConsistencyError("generator with unit relation coefficient is not zero")
    keep = [j for j in range(G.shape[1]) if j != i]
    return RingMatrix(G, ring).take_columns(keep)


def step_invariant_factor(Mb: LatticeBasis, g: RingElement, way: LiftWay = LiftWay.UNIMODULAR,
                          settings: Optional[Settings] = None) -> LiftStep:
    """Enlarge M by a vector whose annihilator modulo M is g.

    Builds v = (sum a_i u_i)/g, the relation a_1 u_1 + ... + a_f u_f - g v = 0
    whose coefficients generate the unit ideal, and turns the f + 1
    generators into f basis vectors of P = Rv + M.

    Args:
        Mb: Integral basis of M
        g: Largest invariant factor of L/M; a unit gives an identity step
        way: Unimodular completion or Euclidean reduction of the relation
        settings: Search settings for find_order_vector

    Returns:
        The LiftStep, with P/M cyclic of order g
    """
    ring = Mb.ring
    method = _METHOD_FOR_WAY[way]
    if ring.is_unit(g):
        return LiftStep(Mb, tuple([ring.zero] * Mb.f), g, Mb, method)
    a = find_order_vector(Mb, g, settings)
    U = Mb.integral_columns()
    try:
        v = RingMatrix.from_columns([U.apply(a)], U.nrows, ring).exact_div(g)
    except RingDivisionError as exc:
        raise InternalConsistencyError(f"order vector numerator is not divisible by {g}") from exc
    relation = list(a) + [-g]
    if not ring.is_unit(ring.gcd_of_list(relation)):
        raise InternalConsistencyError(f"relation {relation} does not generate the unit ideal")
    generators = U.hstack(v)
    if way is LiftWay.UNIMODULAR:
        columns = _rebuild_unimodular(generators, relation)
    else:
        columns = _rebuild_euclidean(generators, relation)
    logger.info("lift step (%s): advanced invariant factor %s", method.value, g)
    return LiftStep(Mb, tuple(a), g, LatticeBasis(columns), method)


def _swap_in(Mb: LatticeBasis, a: Sequence[RingElement], modulus: RingElement) -> Tuple[LatticeBasis, Tuple[RingElement, ...]]:
    """Replace one u_i by v' = (u_i + sum_{j != i} x a_j u_j)/modulus, where x*a_i = 1 (mod modulus)."""
    ring = Mb.ring
    i = next(j for j, aj in enumerate(a) if ring.is_unit(ring.gcd(aj, modulus)))
    x = ring.inverse_mod(a[i], modulus)
    normalized = tuple(ring.one if j == i else ring.div_rem(x * aj, modulus)[1] for j, aj in enumerate(a))
    U = Mb.integral_columns()
    try:
        v = RingMatrix.from_columns([U.apply(normalized)], U.nrows, ring).exact_div(modulus)
    except RingDivisionError as exc:
        raise InternalConsistencyError(f"swapped vector is not divisible by {modulus}") from exc
    columns = U.to_array()
    columns[:, i] = np.array(v.column(0), dtype=object)
    return LatticeBasis(RingMatrix(columns, ring)), normalized


def step_elementary_divisor(Mb: LatticeBasis, p: RingElement, e: int,
                            settings: Optional[Settings] = None) -> LiftStep:
    """Enlarge M by a vector of order p^e, p^e being a largest p-elementary divisor of L/M."""
    ring = Mb.ring
    modulus = ring.one
    for _ in range(e):
        modulus = modulus * p
    a = find_order_vector(Mb, modulus, settings)
    basis, normalized = _swap_in(Mb, a, modulus)
    logger.info("lift step (intro_prime): advanced elementary divisor %s^%d", p, e)
    return LiftStep(Mb, normalized, modulus, basis, LiftMethod.INTRO_PRIME)


def _remaining_after(basis: LatticeBasis, target: Optional[LatticeBasis],
                     expected: QuotientStructure) -> QuotientStructure:
    """The quotient target/basis, recomputed by the oracle when a target is given.

    Raises:
        InternalConsistencyError: If the recomputed structure differs from the expected one
    """
    if target is None:
        return expected
    actual = quotient_invariants_oracle(basis, target)
    if actual != expected:
        raise InternalConsistencyError(f"remaining quotient is {actual}, expected {expected}")
    logger.debug("remaining quotient: %s", actual)
    return actual


def iter_invariant_factor_steps(Mb: LatticeBasis, q: QuotientStructure, way: LiftWay = LiftWay.UNIMODULAR,
                                settings: Optional[Settings] = None,
                                target: Optional[LatticeBasis] = None) -> Iterator[LiftStep]:
    """Steps g_s, g_(s-1), ..., g_1 of the invariant-factor lift.

    With a target, each factor is read off the recomputed quotient
    target/basis rather than off what is left of q.
    """
    remaining = _remaining_after(Mb, target, q)
    basis = Mb
    while not remaining.is_trivial:
        step = step_invariant_factor(basis, remaining.largest, way, settings)
        basis = step.outgoing_basis
        remaining = _remaining_after(basis, target, remaining.without_largest())
        yield step


def lift_by_invariant_factors(Mb: LatticeBasis, q: QuotientStructure, way: LiftWay = LiftWay.UNIMODULAR,
                              settings: Optional[Settings] = None,
                              target: Optional[LatticeBasis] = None) -> LatticeBasis:
    """Basis of L from a basis of M and the invariant factors q of L/M.

    Args:
        Mb: Integral basis of M
        q: Invariant factors of L/M
        way: How each step rebuilds its basis
        settings: Search settings
        target: Optional basis of L; when given, the remaining quotient is
            recomputed after every step and checked

    Returns:
        Basis of L (Mb itself when q is trivial)
    """
    basis = Mb
    for step in iter_invariant_factor_steps(Mb, q, way, settings, target):
        basis = step.outgoing_basis
    return basis


def iter_elementary_divisor_steps(Mb: LatticeBasis, divisors: Iterable[Tuple[RingElement, int]],
                                  settings: Optional[Settings] = None,
                                  target: Optional[LatticeBasis] = None) -> Iterator[LiftStep]:
    """Steps of the elementary-divisor lift: primes smallest first, each prime's exponents largest first."""
    ring = Mb.ring
    remaining = _remaining_after(Mb, target, invariant_factors_from_elementary_divisors(divisors, ring))
    basis = Mb
    while not remaining.is_trivial:
        powers = remaining.prime_powers()
        p = powers[0][0]
        e = max(exp for prime, exp in powers if prime == p)
        step = step_elementary_divisor(basis, p, e, settings)
        basis = step.outgoing_basis
        left = list(powers)
        left.remove((p, e))
        remaining = _remaining_after(basis, target, invariant_factors_from_elementary_divisors(left, ring))
        yield step


def lift_by_elementary_divisors(Mb: LatticeBasis, divisors: Iterable[Tuple[RingElement, int]],
                                settings: Optional[Settings] = None,
                                target: Optional[LatticeBasis] = None) -> LatticeBasis:
    """Basis of L from a basis of M and the elementary divisors (p, e) of L/M."""
    basis = Mb
    for step in iter_elementary_divisor_steps(Mb, divisors, settings, target):
        basis = step.outgoing_basis
    return basis


def iter_prime_steps(Mb: LatticeBasis, index: RingElement, settings: Optional[Settings] = None,
                     target: Optional[LatticeBasis] = None) -> Iterator[LiftStep]:
    """One step per prime factor of the index, counted with multiplicity.

    With a target, the index of basis in target is recomputed after every
    step and must have dropped by exactly the prime just lifted.
    """
    ring = Mb.ring
    if ring.is_zero(index):
        raise InvalidArgument("the index of a sublattice of full rank is nonzero")
    remaining = ring.canonical(index)
    if target is not None and not ring.associates(quotient_invariants_oracle(Mb, target).index, remaining):
        raise InternalConsistencyError(f"index of the starting lattice is not {remaining}")
    basis = Mb
    for p, e in ring.factorize(index):
        for _ in range(e):
            a = find_order_vector(basis, p, settings)
            outgoing, normalized = _swap_in(basis, a, p)
            logger.info("lift step (intro_prime): advanced prime %s", p)
            remaining = ring.exact_div(remaining, p)
            if target is not None:
                actual = quotient_invariants_oracle(outgoing, target).index
                if not ring.associates(actual, remaining):
                    raise InternalConsistencyError(f"remaining index is {actual}, expected {remaining}")
            yield LiftStep(basis, normalized, p, outgoing, LiftMethod.INTRO_PRIME)
            basis = outgoing


def lift_prime_at_a_time(Mb: LatticeBasis, index: RingElement, settings: Optional[Settings] = None,
                         target: Optional[LatticeBasis] = None) -> LatticeBasis:
    """Basis of L from a basis of M and the index i(M, L), one prime at a time."""
    basis = Mb
    for step in iter_prime_steps(Mb, index, settings, target):
        basis = step.outgoing_basis
    return basis

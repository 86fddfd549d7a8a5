"""
Euclidean-domain arithmetic.

EuclideanRing is the contract every algorithm in the package is written
against: division with remainder, a Euclidean size function, canonical
associates, and the fraction field. Nothing outside this module assumes the
elements are integers. IntegerRing is the required instance and ZZ its shared
value; the module-level helpers default to it.
"""

import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Iterable, List, Optional, Tuple

from .exceptions import InvalidArgument, NotARingElement, RingDivisionError, UnsupportedOperation

RingElement = Any


class EuclideanRing(ABC):
    """Abstract Euclidean domain with effective division and gcds.

    Subclasses supply division with remainder, the size function delta,
    unit normalisation and the fraction field; gcd, lcm and modular inverses
    are derived here from those primitives.
    """

    name: str = "R"

    @property
    def zero(self) -> RingElement:
        return self.coerce(0)

    @property
    def one(self) -> RingElement:
        return self.coerce(1)

    @abstractmethod
    def coerce(self, value: Any) -> RingElement:
        """Convert a Python value into an element of the ring."""

    @abstractmethod
    def div_rem(self, a: RingElement, b: RingElement) -> Tuple[RingElement, RingElement]:
        """Return (q, r) with a = b*q + r and r = 0 or delta(r) < delta(b)."""

    @abstractmethod
    def delta(self, a: RingElement) -> int:
        """Euclidean size of a nonzero element."""

    @abstractmethod
    def normal_unit(self, a: RingElement) -> RingElement:
        """Unit u such that u*a is the canonical associate of a (one for zero)."""

    @abstractmethod
    def unit_inverse(self, u: RingElement) -> RingElement:
        """Inverse of a unit."""

    @abstractmethod
    def fraction(self, numerator: RingElement, denominator: RingElement = None) -> Any:
        """Element of the fraction field, in lowest terms with canonical denominator."""

    @abstractmethod
    def numerator(self, x: Any) -> RingElement:
        """Numerator of a fraction-field element in lowest terms."""

    @abstractmethod
    def denominator(self, x: Any) -> RingElement:
        """Canonical denominator of a fraction-field element in lowest terms."""

    def is_zero(self, a: RingElement) -> bool:
        return a == self.zero

    def is_unit(self, a: RingElement) -> bool:
        if self.is_zero(a):
            return False
        _, r = self.div_rem(self.one, a)
        return self.is_zero(r)

    def canonical(self, a: RingElement) -> RingElement:
        return a * self.normal_unit(a)

    def associates(self, a: RingElement, b: RingElement) -> bool:
        return self.canonical(a) == self.canonical(b)

    def divides(self, a: RingElement, b: RingElement) -> bool:
        """True if a | b. Zero divides only zero."""
        if self.is_zero(a):
            return self.is_zero(b)
        _, r = self.div_rem(b, a)
        return self.is_zero(r)

    def exact_div(self, a: RingElement, b: RingElement) -> RingElement:
        """Return a / b, raising RingDivisionError unless b | a."""
        q, r = self.div_rem(a, b)
        if not self.is_zero(r):
            raise RingDivisionError(f"{a} is not divisible by {b} in {self.name}")
        return q

    def ext_gcd(self, a: RingElement, b: RingElement) -> Tuple[RingElement, RingElement, RingElement]:
        """Extended Euclid: (g, x, y) with g = x*a + y*b and g the canonical gcd.

        gcd(0, 0) is 0.
        """
        old_r, r = a, b
        old_x, x = self.one, self.zero
        old_y, y = self.zero, self.one
        while not self.is_zero(r):
            q, rem = self.div_rem(old_r, r)
            old_r, r = r, rem
            old_x, x = x, old_x - q * x
            old_y, y = y, old_y - q * y
        u = self.normal_unit(old_r)
        return old_r * u, old_x * u, old_y * u

    def gcd(self, a: RingElement, b: RingElement) -> RingElement:
        return self.ext_gcd(a, b)[0]

    def lcm(self, a: RingElement, b: RingElement) -> RingElement:
        if self.is_zero(a) or self.is_zero(b):
            return self.zero
        return self.canonical(self.exact_div(a * b, self.gcd(a, b)))

    def gcd_of_list(self, values: Iterable[RingElement]) -> RingElement:
        g = self.zero
        for value in values:
            g = self.gcd(g, value)
            if self.is_unit(g):
                return self.one
        return g

    def lcm_of_list(self, values: Iterable[RingElement]) -> RingElement:
        result = self.one
        for value in values:
            result = self.lcm(result, value)
        return result

    def residue(self, a: RingElement, modulus: RingElement) -> RingElement:
        """Representative of a modulo the ideal generated by modulus."""
        return self.div_rem(a, modulus)[1]

    def inverse_mod(self, a: RingElement, modulus: RingElement) -> RingElement:
        """Inverse of a modulo modulus, as a residue.

        Raises:
            RingDivisionError: If a is not invertible modulo modulus
        """
        g, x, _ = self.ext_gcd(a, modulus)
        if not self.is_unit(g):
            raise RingDivisionError(f"{a} is not invertible modulo {modulus}")
        return self.residue(x * self.unit_inverse(g), modulus)

    def is_prime(self, a: RingElement) -> bool:
        raise UnsupportedOperation(f"primality testing is not available over {self.name}")

    def factorize(self, a: RingElement) -> List[Tuple[RingElement, int]]:
        raise UnsupportedOperation(f"factorization is not available over {self.name}")

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class IntegerRing(EuclideanRing):
    """The ring of arbitrary-precision integers.

    Canonical associates are non-negative, delta is the absolute value and
    division uses the balanced remainder |r| <= |b|/2.
    """

    name = "ZZ"

    def coerce(self, value: Any) -> int:
        if isinstance(value, bool):
            return int(value)
        if isinstance(value, int):
            return value
        if isinstance(value, Fraction) and value.denominator == 1:
            return value.numerator
        if isinstance(value, str):
            try:
                return int(value.strip())
            except ValueError:
                raise NotARingElement(f"cannot interpret {value!r} as an integer") from None
        if hasattr(value, "__index__"):
            return int(value.__index__())
        raise NotARingElement(f"cannot interpret {value!r} as an integer")

    def div_rem(self, a: int, b: int) -> Tuple[int, int]:
        if b == 0:
            raise RingDivisionError("division by zero")
        q, r = divmod(a, b)
        if 2 * abs(r) > abs(b):
            r -= b
            q += 1
        return q, r

    def delta(self, a: int) -> int:
        return abs(a)

    def normal_unit(self, a: int) -> int:
        return -1 if a < 0 else 1

    def unit_inverse(self, u: int) -> int:
        if u not in (1, -1):
            raise RingDivisionError(f"{u} is not a unit in ZZ")
        return u

    def is_unit(self, a: int) -> bool:
        return a in (1, -1)

    def canonical(self, a: int) -> int:
        return abs(a)

    def gcd(self, a: int, b: int) -> int:
        return math.gcd(a, b)

    def residue(self, a: int, modulus: int) -> int:
        if modulus == 0:
            raise RingDivisionError("residue modulo zero")
        return a % abs(modulus)

    def fraction(self, numerator: int, denominator: Optional[int] = None) -> Fraction:
        if denominator is None:
            return Fraction(numerator)
        if denominator == 0:
            raise RingDivisionError("zero denominator")
        return Fraction(numerator, denominator)

    def numerator(self, x: Fraction) -> int:
        return Fraction(x).numerator

    def denominator(self, x: Fraction) -> int:
        return Fraction(x).denominator

    def is_prime(self, a: int) -> bool:
        n = abs(a)
        if n < 2:
            return False
        if n % 2 == 0:
            return n == 2
        p = 3
        while p * p <= n:
            if n % p == 0:
                return False
            p += 2
        return True

    def factorize(self, a: int) -> List[Tuple[int, int]]:
        """Prime factorization of |a| by trial division, primes increasing.

        Units factor as the empty product.

        Raises:
            InvalidArgument: If a is zero
        """
        n = abs(a)
        if n == 0:
            raise InvalidArgument("cannot factorize zero")
        factors: List[Tuple[int, int]] = []
        p = 2
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                factors.append((p, e))
            p += 1 if p == 2 else 2
        if n > 1:
            factors.append((n, 1))
        return factors


ZZ = IntegerRing()


def div_rem(a: RingElement, b: RingElement, ring: EuclideanRing = ZZ) -> Tuple[RingElement, RingElement]:
    return ring.div_rem(a, b)


def ext_gcd(a: RingElement, b: RingElement, ring: EuclideanRing = ZZ) -> Tuple[RingElement, RingElement, RingElement]:
    return ring.ext_gcd(a, b)


def lcm(a: RingElement, b: RingElement, ring: EuclideanRing = ZZ) -> RingElement:
    return ring.lcm(a, b)


def gcd_of_list(values: Iterable[RingElement], ring: EuclideanRing = ZZ) -> RingElement:
    return ring.gcd_of_list(values)


def is_unit(a: RingElement, ring: EuclideanRing = ZZ) -> bool:
    return ring.is_unit(a)


def factorize(a: RingElement, ring: EuclideanRing = ZZ) -> List[Tuple[RingElement, int]]:
    return ring.factorize(a)

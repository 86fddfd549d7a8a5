"""
Exception hierarchy for the Diophantine lattice solver.

Every error raised by the package derives from DiophantineError. Where a
builtin exception describes the same failure, the concrete class also derives
from it so callers can catch either.
"""

from typing import Any, Optional


class DiophantineError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(DiophantineError, ValueError):
    """Matrix shapes are incompatible with the requested operation."""


class RingDivisionError(DiophantineError, ZeroDivisionError):
    """Division by zero, or a division that was required to be exact was not."""


class UnsupportedOperation(DiophantineError, NotImplementedError):
    """The ring instance does not provide the requested operation."""


class NoIntegralSolution(DiophantineError, ArithmeticError):
    """AX = B has no solution X with entries in the ring."""


class NotPrimeError(DiophantineError, ValueError):
    """An operation that needs a prime modulus received a composite one."""


class RankOutOfScope(DiophantineError):
    """The matrix has rank 0 or full column rank.

    Both cases have a trivial nullspace (the whole module, or zero), which is
    carried on the exception so front ends can still report it.

    Attributes:
        rank: Rank of the offending matrix
        n: Number of columns
        trivial_basis: Basis of the nullspace (n x n identity or n x 0 matrix)
    """

    def __init__(self, rank: int, n: int, trivial_basis: Optional[Any] = None):
        self.rank = rank
        self.n = n
        self.trivial_basis = trivial_basis
        if rank == 0:
            detail = "rank 0, every vector is a solution"
        else:
            detail = "full column rank, only the zero vector is a solution"
        super().__init__(f"rank {rank} of a matrix with {n} columns is out of scope ({detail})")


class InternalConsistencyError(DiophantineError, RuntimeError):
    """A self-check failed. This always indicates a bug, never bad input."""


class NotLargestFactor(DiophantineError):
    """No vector with the requested annihilator exists in the searched lattice."""


class NotUnimodularRelation(DiophantineError, ValueError):
    """A relation vector whose entries do not generate the unit ideal."""


class NotSublattice(DiophantineError, ValueError):
    """The first lattice is not contained in the second."""


class BruteForceBoundExceeded(DiophantineError, ValueError):
    """The enumeration would exceed the configured brute-force bound."""


class InputFormatError(DiophantineError, ValueError):
    """A matrix file could not be parsed."""


class VerificationError(DiophantineError):
    """A computed basis failed independent verification."""


class InvalidArgument(DiophantineError, ValueError):
    """An argument is outside the domain of the operation (a zero modulus, a unit where a non-unit is needed)."""


class NotARingElement(DiophantineError, TypeError):
    """A value cannot be read as an element of the ring."""

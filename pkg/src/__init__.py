"""Diophantine Lattice Solver - exact integral nullspaces of homogeneous linear systems"""

__version__ = "1.0.0"

from .exact_matrix import RingMatrix, smith_normal_form
from .lattice import LatticeBasis, QuotientStructure, analyze
from .reduce import ReducedSystem, reduce_matrix
from .ring import ZZ, EuclideanRing, IntegerRing
from .solve import nullspace_basis_direct, nullspace_basis_snf, prime_case_basis

__all__ = [
    "ZZ",
    "EuclideanRing",
    "IntegerRing",
    "LatticeBasis",
    "QuotientStructure",
    "ReducedSystem",
    "RingMatrix",
    "analyze",
    "nullspace_basis_direct",
    "nullspace_basis_snf",
    "prime_case_basis",
    "reduce_matrix",
    "smith_normal_form",
]

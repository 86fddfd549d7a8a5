"""
Dense exact matrices over a Euclidean domain and over its fraction field.

Entries live in numpy arrays of dtype=object so the ring's own arithmetic
(arbitrary-precision integers for ZZ) is used for every operation; nothing is
ever rounded. Matrices are immutable values: every operation returns a new
matrix.

Provided here:
    rref               reduced row echelon form over the fraction field
    det                fraction-free (Bareiss) determinant
    smith_normal_form  D = P*A*Q with unimodular P, Q and d_1 | d_2 | ...
    solve_integral     AX = B over the ring, via the Smith form
    rref_mod_p         reduced row echelon form over R/Rp
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DimensionError, NoIntegralSolution, NotPrimeError
from .ring import ZZ, EuclideanRing, RingElement

logger = logging.getLogger(__name__)


def _object_array(rows: Sequence[Sequence[Any]], nrows: int, ncols: int, convert: Callable[[Any], Any]) -> np.ndarray:
    data = np.empty((nrows, ncols), dtype=object)
    for i in range(nrows):
        if len(rows[i]) != ncols:
            raise DimensionError(f"row {i} has {len(rows[i])} entries, expected {ncols}")
        for j in range(ncols):
            data[i, j] = convert(rows[i][j])
    return data


class RingMatrix:
    """Immutable m x n matrix with entries in a Euclidean ring.

    Attributes:
        ring: The ring the entries belong to
    """

    __slots__ = ("_data", "ring")

    def __init__(self, data: Any, ring: EuclideanRing = ZZ):
        if isinstance(data, RingMatrix):
            array = data._data.copy()
        elif isinstance(data, np.ndarray) and data.ndim == 2:
            array = np.empty(data.shape, dtype=object)
            for index in np.ndindex(data.shape):
                array[index] = ring.coerce(data[index])
        else:
            rows = [list(row) for row in data]
            ncols = len(rows[0]) if rows else 0
            array = _object_array(rows, len(rows), ncols, ring.coerce)
        array.flags.writeable = False
        self._data = array
        self.ring = ring

    @classmethod
    def _wrap(cls, array: np.ndarray, ring: EuclideanRing) -> "RingMatrix":
        matrix = cls.__new__(cls)
        array = np.array(array, dtype=object, copy=True)
        array.flags.writeable = False
        matrix._data = array
        matrix.ring = ring
        return matrix

    @classmethod
    def zeros(cls, nrows: int, ncols: int, ring: EuclideanRing = ZZ) -> "RingMatrix":
        array = np.empty((nrows, ncols), dtype=object)
        array.fill(ring.zero)
        return cls._wrap(array, ring)

    @classmethod
    def identity(cls, n: int, ring: EuclideanRing = ZZ) -> "RingMatrix":
        array = np.empty((n, n), dtype=object)
        array.fill(ring.zero)
        for i in range(n):
            array[i, i] = ring.one
        return cls._wrap(array, ring)

    @classmethod
    def diagonal(cls, entries: Sequence[RingElement], nrows: Optional[int] = None,
                 ncols: Optional[int] = None, ring: EuclideanRing = ZZ) -> "RingMatrix":
        nrows = len(entries) if nrows is None else nrows
        ncols = nrows if ncols is None else ncols
        array = np.empty((nrows, ncols), dtype=object)
        array.fill(ring.zero)
        for i, entry in enumerate(entries):
            array[i, i] = ring.coerce(entry)
        return cls._wrap(array, ring)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RingElement]], nrows: Optional[int] = None,
                     ring: EuclideanRing = ZZ) -> "RingMatrix":
        columns = [list(column) for column in columns]
        if nrows is None:
            if not columns:
                raise DimensionError("the row count of a matrix without columns must be given")
            nrows = len(columns[0])
        array = np.empty((nrows, len(columns)), dtype=object)
        array.fill(ring.zero)
        for j, column in enumerate(columns):
            if len(column) != nrows:
                raise DimensionError(f"column {j} has {len(column)} entries, expected {nrows}")
            for i, entry in enumerate(column):
                array[i, j] = ring.coerce(entry)
        return cls._wrap(array, ring)

    @classmethod
    def permutation(cls, order: Sequence[int], ring: EuclideanRing = ZZ) -> "RingMatrix":
        """Permutation matrix S with (M*S) column k equal to M column order[k]."""
        n = len(order)
        array = np.empty((n, n), dtype=object)
        array.fill(ring.zero)
        for k, source in enumerate(order):
            array[source, k] = ring.one
        return cls._wrap(array, ring)

    @property
    def shape(self) -> Tuple[int, int]:
        return self._data.shape

    @property
    def nrows(self) -> int:
        return self._data.shape[0]

    @property
    def ncols(self) -> int:
        return self._data.shape[1]

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, index: Tuple[int, int]) -> RingElement:
        return self._data[index]

    def to_array(self) -> np.ndarray:
        """Writable copy of the underlying object array."""
        return self._data.copy()

    def tolist(self) -> List[List[RingElement]]:
        return [list(row) for row in self._data]

    def rows(self) -> List[List[RingElement]]:
        return self.tolist()

    def column(self, j: int) -> List[RingElement]:
        return list(self._data[:, j])

    def columns(self) -> List[List[RingElement]]:
        return [self.column(j) for j in range(self.ncols)]

    def entries(self) -> Iterable[RingElement]:
        return iter(self._data.flat)

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(x) for x in self._data.flat)

    def transpose(self) -> "RingMatrix":
        return RingMatrix._wrap(self._data.T, self.ring)

    @property
    def T(self) -> "RingMatrix":
        return self.transpose()

    def take_columns(self, indices: Sequence[int]) -> "RingMatrix":
        return RingMatrix._wrap(self._data[:, list(indices)].reshape(self.nrows, len(indices)), self.ring)

    def take_rows(self, indices: Sequence[int]) -> "RingMatrix":
        return RingMatrix._wrap(self._data[list(indices), :].reshape(len(indices), self.ncols), self.ring)

    def hstack(self, other: "RingMatrix") -> "RingMatrix":
        if self.nrows != other.nrows:
            raise DimensionError(f"cannot stack {self.shape} beside {other.shape}")
        return RingMatrix._wrap(np.hstack([self._data, other._data]), self.ring)

    def vstack(self, other: "RingMatrix") -> "RingMatrix":
        if self.ncols != other.ncols:
            raise DimensionError(f"cannot stack {self.shape} above {other.shape}")
        return RingMatrix._wrap(np.vstack([self._data, other._data]), self.ring)

    def map(self, fn: Callable[[RingElement], RingElement]) -> "RingMatrix":
        array = np.empty(self.shape, dtype=object)
        for index in np.ndindex(self.shape):
            array[index] = fn(self._data[index])
        return RingMatrix._wrap(array, self.ring)

    def scale(self, c: RingElement) -> "RingMatrix":
        return self.map(lambda x: c * x)

    def exact_div(self, c: RingElement) -> "RingMatrix":
        """Divide every entry by c, raising RingDivisionError if any division is inexact."""
        return self.map(lambda x: self.ring.exact_div(x, c))

    def apply(self, vector: Sequence[RingElement]) -> List[RingElement]:
        """Matrix-vector product as a plain list."""
        if len(vector) != self.ncols:
            raise DimensionError(f"vector of length {len(vector)} against {self.shape} matrix")
        return (self @ RingMatrix.from_columns([vector], self.ncols, self.ring)).column(0)

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        if not isinstance(other, RingMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.ncols == 0:
            return RingMatrix.zeros(self.nrows, other.ncols, self.ring)
        return RingMatrix._wrap(np.dot(self._data, other._data), self.ring)

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return RingMatrix._wrap(self._data + other._data, self.ring)

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return RingMatrix._wrap(self._data - other._data, self.ring)

    def __neg__(self) -> "RingMatrix":
        return self.map(lambda x: -x)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self._data.flat, other._data.flat))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"RingMatrix({self.tolist()!r})"


class FractionMatrix:
    """Immutable matrix over the fraction field of a ring.

    Every entry is kept in lowest terms with a canonical denominator.
    """

    __slots__ = ("_data", "ring")

    def __init__(self, array: np.ndarray, ring: EuclideanRing = ZZ):
        data = np.empty(array.shape, dtype=object)
        for index in np.ndindex(array.shape):
            value = array[index]
            data[index] = ring.fraction(ring.numerator(value), ring.denominator(value))
        data.flags.writeable = False
        self._data = data
        self.ring = ring

    @classmethod
    def from_ring_matrix(cls, matrix: RingMatrix) -> "FractionMatrix":
        ring = matrix.ring
        array = np.empty(matrix.shape, dtype=object)
        for index in np.ndindex(matrix.shape):
            array[index] = ring.fraction(matrix[index])
        return cls(array, ring)

    @property
    def shape(self) -> Tuple[int, int]:
        return self._data.shape

    def __getitem__(self, index: Tuple[int, int]) -> Any:
        return self._data[index]

    def tolist(self) -> List[List[Any]]:
        return [list(row) for row in self._data]

    def take_columns(self, indices: Sequence[int]) -> "FractionMatrix":
        return FractionMatrix(self._data[:, list(indices)].reshape(self.shape[0], len(indices)), self.ring)

    def common_denominator(self) -> RingElement:
        """Least common multiple of all entry denominators."""
        return self.ring.lcm_of_list(self.ring.denominator(x) for x in self._data.flat)

    def scaled(self, c: RingElement) -> RingMatrix:
        """c times this matrix, which must come out integral."""
        ring = self.ring
        array = np.empty(self.shape, dtype=object)
        for index in np.ndindex(self.shape):
            value = self._data[index] * c
            array[index] = ring.exact_div(ring.numerator(value), ring.denominator(value))
        return RingMatrix._wrap(array, ring)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FractionMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self._data.flat, other._data.flat))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FractionMatrix({self.tolist()!r})"


@dataclass(frozen=True)
class RrefResult:
    """Reduced row echelon form over the fraction field.

    Attributes:
        matrix: The echelon form E
        pivots: Strictly increasing pivot column indices (0-based)
        rank: Number of pivots
    """
    matrix: FractionMatrix
    pivots: Tuple[int, ...]
    rank: int


@dataclass(frozen=True)
class SmithDecomposition:
    """D = P*A*Q with P, Q unimodular and d_1 | d_2 | ... on the diagonal of D."""
    D: RingMatrix
    P: RingMatrix
    Q: RingMatrix

    @property
    def diagonal(self) -> Tuple[RingElement, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if not self.D.ring.is_zero(x))

    @property
    def invariant_factors(self) -> Tuple[RingElement, ...]:
        """The nonzero diagonal entries q_1 | ... | q_t."""
        return self.diagonal[: self.rank]

    def reproduces(self, A: RingMatrix) -> bool:
        return self.P @ A @ self.Q == self.D


@dataclass(frozen=True)
class ModularRref:
    """Reduced row echelon form of a matrix over R/Rp.

    Attributes:
        matrix: H, entries canonical residues, H mod p in reduced echelon form
        leading_columns: Leading column index of each nonzero row (0-based)
        rank: Rank over R/Rp
        modulus: The prime p
    """
    matrix: RingMatrix
    leading_columns: Tuple[int, ...]
    rank: int
    modulus: RingElement


def rref(A: RingMatrix) -> RrefResult:
    """Reduced row echelon form of A over the fraction field.

    Args:
        A: Matrix over the ring

    Returns:
        RrefResult with the echelon form, pivot columns and rank
    """
    ring = A.ring
    m, n = A.shape
    E = np.empty((m, n), dtype=object)
    for index in np.ndindex(A.shape):
        E[index] = ring.fraction(A[index])
    pivots: List[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        source = next((i for i in range(row, m) if E[i, col] != 0), None)
        if source is None:
            continue
        if source != row:
            E[[row, source]] = E[[source, row]]
        E[row] = E[row] / E[row, col]
        for i in range(m):
            factor = E[i, col]
            if i != row and factor != 0:
                E[i] = E[i] - factor * E[row]
        pivots.append(col)
        row += 1
    return RrefResult(FractionMatrix(E, ring), tuple(pivots), len(pivots))


def rank(A: RingMatrix) -> int:
    return rref(A).rank


def det(A: RingMatrix) -> RingElement:
    """Exact determinant by fraction-free Bareiss elimination.

    Raises:
        DimensionError: If A is not square
    """
    if not A.is_square:
        raise DimensionError(f"determinant of a non-square {A.shape} matrix")
    ring = A.ring
    n = A.nrows
    if n == 0:
        return ring.one
    M = A.to_array()
    sign = ring.one
    previous = ring.one
    for k in range(n - 1):
        if ring.is_zero(M[k, k]):
            swap = next((i for i in range(k + 1, n) if not ring.is_zero(M[i, k])), None)
            if swap is None:
                return ring.zero
            M[[k, swap]] = M[[swap, k]]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i, j] = ring.exact_div(M[i, j] * M[k, k] - M[i, k] * M[k, j], previous)
        previous = M[k, k]
    return sign * M[n - 1, n - 1]


def is_unimodular(A: RingMatrix) -> bool:
    return A.is_square and A.ring.is_unit(det(A))


def _select_pivot(D: np.ndarray, t: int, ring: EuclideanRing) -> Optional[Tuple[int, int]]:
    best: Optional[Tuple[int, int, int]] = None
    m, n = D.shape
    for i in range(t, m):
        for j in range(t, n):
            if not ring.is_zero(D[i, j]):
                key = (ring.delta(D[i, j]), i, j)
                if best is None or key < best:
                    best = key
    return None if best is None else (best[1], best[2])


def _clear_column(D: np.ndarray, P: np.ndarray, t: int, ring: EuclideanRing) -> None:
    for i in range(t + 1, D.shape[0]):
        b = D[i, t]
        if ring.is_zero(b):
            continue
        a = D[t, t]
        if ring.divides(a, b):
            q = ring.exact_div(b, a)
            D[i] = D[i] - q * D[t]
            P[i] = P[i] - q * P[t]
        else:
            g, x, y = ring.ext_gcd(a, b)
            s, w = ring.exact_div(a, g), ring.exact_div(b, g)
            for M in (D, P):
                top, bottom = M[t].copy(), M[i].copy()
                M[t] = x * top + y * bottom
                M[i] = -w * top + s * bottom


def _clear_row(D: np.ndarray, Q: np.ndarray, t: int, ring: EuclideanRing) -> None:
    for j in range(t + 1, D.shape[1]):
        b = D[t, j]
        if ring.is_zero(b):
            continue
        a = D[t, t]
        if ring.divides(a, b):
            q = ring.exact_div(b, a)
            D[:, j] = D[:, j] - q * D[:, t]
            Q[:, j] = Q[:, j] - q * Q[:, t]
        else:
            g, x, y = ring.ext_gcd(a, b)
            s, w = ring.exact_div(a, g), ring.exact_div(b, g)
            for M in (D, Q):
                left, right = M[:, t].copy(), M[:, j].copy()
                M[:, t] = x * left + y * right
                M[:, j] = -w * left + s * right


def _first_non_multiple(D: np.ndarray, t: int, ring: EuclideanRing) -> Optional[int]:
    m, n = D.shape
    for i in range(t + 1, m):
        for j in range(t + 1, n):
            if not ring.divides(D[t, t], D[i, j]):
                return i
    return None


def smith_normal_form(A: RingMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular multipliers.

    Pivots are chosen with minimal delta (ties: lowest row, then lowest
    column) and brought to the diagonal; extended-gcd row and column
    operations clear the pivot's row and column. When the pivot fails to
    divide an entry of the remaining block, that entry's row is added to the
    pivot row and clearing repeats, so the chain d_1 | d_2 | ... holds as
    soon as each pivot is fixed.

    Args:
        A: m x n matrix over a Euclidean ring

    Returns:
        SmithDecomposition with D = P*A*Q, canonical nonzero diagonal, zeros last
    """
    ring = A.ring
    m, n = A.shape
    D = A.to_array()
    P = RingMatrix.identity(m, ring).to_array()
    Q = RingMatrix.identity(n, ring).to_array()
    t = 0
    while t < min(m, n):
        pivot = _select_pivot(D, t, ring)
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            D[[t, i]] = D[[i, t]]
            P[[t, i]] = P[[i, t]]
        if j != t:
            D[:, [t, j]] = D[:, [j, t]]
            Q[:, [t, j]] = Q[:, [j, t]]
        while True:
            _clear_column(D, P, t, ring)
            _clear_row(D, Q, t, ring)
            if any(not ring.is_zero(D[k, t]) for k in range(t + 1, m)):
                continue
            offender = _first_non_multiple(D, t, ring)
            if offender is None:
                break
            D[t] = D[t] + D[offender]
            P[t] = P[t] + P[offender]
        u = ring.normal_unit(D[t, t])
        if u != ring.one:
            D[t] = u * D[t]
            P[t] = u * P[t]
        t += 1
    logger.debug("Smith form of %dx%d matrix has rank %d", m, n, t)
    return SmithDecomposition(RingMatrix._wrap(D, ring), RingMatrix._wrap(P, ring), RingMatrix._wrap(Q, ring))


def solve_integral(A: RingMatrix, B: RingMatrix) -> RingMatrix:
    """Solve AX = B with X over the ring.

    With D = P*A*Q the system becomes D*Y = P*B, X = Q*Y; it is solvable
    exactly when each of the first rank(D) rows is divisible by its diagonal
    entry and the remaining rows of P*B vanish. Free coordinates are set to 0.

    Raises:
        DimensionError: If A and B have different row counts
        NoIntegralSolution: If no solution over the ring exists
    """
    if A.nrows != B.nrows:
        raise DimensionError(f"cannot solve {A.shape} system against {B.shape} right-hand side")
    ring = A.ring
    snf = smith_normal_form(A)
    C = snf.P @ B
    t = snf.rank
    Y = np.empty((A.ncols, B.ncols), dtype=object)
    Y.fill(ring.zero)
    for c in range(B.ncols):
        for i in range(t):
            q, r = ring.div_rem(C[i, c], snf.D[i, i])
            if not ring.is_zero(r):
                raise NoIntegralSolution(f"column {c}: {C[i, c]} is not divisible by invariant factor {snf.D[i, i]}")
            Y[i, c] = q
        for i in range(t, A.nrows):
            if not ring.is_zero(C[i, c]):
                raise NoIntegralSolution(f"column {c} is not in the column space of the coefficient matrix")
    return snf.Q @ RingMatrix._wrap(Y, ring)


def inverse_unimodular(A: RingMatrix) -> RingMatrix:
    """Inverse over the ring of a unimodular matrix.

    Raises:
        DimensionError: If A is not square
        NoIntegralSolution: If A is not unimodular
    """
    if not A.is_square:
        raise DimensionError(f"inverse of a non-square {A.shape} matrix")
    if not is_unimodular(A):
        raise NoIntegralSolution("matrix is not unimodular, no inverse over the ring")
    return solve_integral(A, RingMatrix.identity(A.nrows, A.ring))


def rref_mod_p(K: RingMatrix, p: RingElement) -> ModularRref:
    """Reduced row echelon form of K modulo the prime p.

    Args:
        K: Matrix over the ring
        p: Prime element

    Returns:
        ModularRref whose matrix has canonical residue entries

    Raises:
        NotPrimeError: If p is not prime
    """
    ring = K.ring
    if not ring.is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    m, n = K.shape
    H = np.empty((m, n), dtype=object)
    for index in np.ndindex(K.shape):
        H[index] = ring.residue(K[index], p)

    def reduce_row(row: np.ndarray) -> np.ndarray:
        return np.array([ring.residue(x, p) for x in row], dtype=object)

    leading: List[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        source = next((i for i in range(row, m) if not ring.is_zero(H[i, col])), None)
        if source is None:
            continue
        if source != row:
            H[[row, source]] = H[[source, row]]
        H[row] = reduce_row(ring.inverse_mod(H[row, col], p) * H[row])
        for i in range(m):
            factor = H[i, col]
            if i != row and not ring.is_zero(factor):
                H[i] = reduce_row(H[i] - factor * H[row])
        leading.append(col)
        row += 1
    return ModularRref(RingMatrix._wrap(H, ring), tuple(leading), len(leading), p)

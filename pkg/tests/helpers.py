"""The worked systems and random instance generators shared by the suites."""

import random

from src.exact_matrix import RingMatrix, rank
from src.reduce import reduce_matrix

ONE_EQUATION_PAIR = [[2, 3, 5, 4], [3, -5, 2, -7]]
VANDERMONDE_SYSTEM = [[1, 1, 1, 1, 2, 3], [1, 3, 7, 4, 5, 6], [1, 9, 49, 7, 8, 9]]
COMPOSITE_SYSTEM = [[12, 24, 36, -4, 12, 44], [24, 36, 12, -2, 10, 20], [36, 12, 24, 0, 20, 44]]
SATURATED_SYSTEM = [[2, 1, 1], [0, 3, 1]]


def random_matrix(rng: random.Random, low: int = -20, high: int = 20, max_dim: int = 6) -> RingMatrix:
    """Random matrix with 2 <= m, n <= max_dim and 0 < rank < n."""
    while True:
        m, n = rng.randint(2, max_dim), rng.randint(2, max_dim)
        A = RingMatrix([[rng.randint(low, high) for _ in range(n)] for _ in range(m)])
        if 0 < rank(A) < n:
            return A


def random_prime_d_matrix(rng: random.Random, rows: int = 2, cols: int = 4, bound: int = 9) -> RingMatrix:
    """Random rows x cols matrix whose reduced system has a prime d."""
    while True:
        A = RingMatrix([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)])
        if not 0 < rank(A) < cols:
            continue
        rs = reduce_matrix(A)
        if rs.ring.is_prime(rs.d):
            return A


def random_unimodular(rng: random.Random, n: int, steps: int = 8) -> RingMatrix:
    """Product of random elementary column operations."""
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.randint(-3, 3)
        for row in rows:
            row[j] += c * row[i]
    if rng.random() < 0.5:
        for row in rows:
            row[0] = -row[0]
    return RingMatrix(rows)

"""GF(2) combination of SR pairs into a congruence of squares.

Each pair contributes one column: per-prime exponent differences
(u side minus residue side) plus a last row carrying the residue's sign bit.
A mod-2 kernel vector selects a subset whose exponent sum is even everywhere
and whose negative signs pair up, which yields X^2 = Y^2 (mod N) and, with
luck, a nontrivial gcd.

Elimination packs each matrix row into one Python integer (bit i = column i),
so a row XOR is a single bigint operation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numtheory import FactorBase
from .relations import SrPair

__all__ = [
    "RelationMatrix",
    "build_exponent_matrix",
    "extract_factors",
    "null_space_mod2",
]


@dataclass(frozen=True)
class RelationMatrix:
    """Integer exponent-difference matrix; rows = base primes then sign row."""

    matrix: np.ndarray  # (len(base)+1, n_pairs) int64
    base: FactorBase
    pairs: tuple[SrPair, ...]


def build_exponent_matrix(pairs: list[SrPair], base: FactorBase) -> RelationMatrix:
    """Column j = u_exponents - residual_exponents of pair j, sign bit last."""
    if not pairs:
        raise ValueError("at least one SR pair is required")
    n_primes = len(base.primes)
    matrix = np.zeros((n_primes + 1, len(pairs)), dtype=np.int64)
    for j, pair in enumerate(pairs):
        if len(pair.u_exponents) != n_primes or len(pair.residual_exponents) != n_primes:
            raise ValueError(f"pair {j} was tested against a different factor base")
        matrix[:n_primes, j] = np.array(pair.u_exponents, dtype=np.int64) - np.array(
            pair.residual_exponents, dtype=np.int64
        )
        matrix[n_primes, j] = 0 if pair.residual_sign == 1 else 1
    return RelationMatrix(matrix=matrix, base=base, pairs=tuple(pairs))


def null_space_mod2(matrix: np.ndarray) -> list[np.ndarray]:
    """Basis of { z : M z = 0 (mod 2) }, one uint8 vector per free column.

    Gaussian elimination on bit-packed rows; basis vectors come out in free
    column order, deterministically.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[1] < 1:
        raise ValueError("matrix must be 2-d with at least one column")
    n_rows, n_cols = m.shape
    rows = []
    for i in range(n_rows):
        packed = 0
        for j in np.nonzero(m[i] & 1)[0]:
            packed |= 1 << int(j)
        rows.append(packed)

    pivot_of_col: dict[int, int] = {}
    rank = 0
    for col in range(n_cols):
        mask = 1 << col
        pivot = next(
            (i for i in range(rank, len(rows)) if rows[i] & mask), None
        )
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
        pivot_of_col[col] = rank
        rank += 1

    basis = []
    for free in range(n_cols):
        if free in pivot_of_col:
            continue
        z = np.zeros(n_cols, dtype=np.uint8)
        z[free] = 1
        for col, row_idx in pivot_of_col.items():
            if rows[row_idx] & (1 << free):
                z[col] = 1
        basis.append(z)
    return basis


def extract_factors(
    relation: RelationMatrix,
    kernel: list[np.ndarray],
    n: int,
    *,
    combination_budget: int | None = None,
) -> set[int]:
    """Nontrivial factors of n from kernel vectors (and optional pair sums).

    Every candidate z must satisfy M z = 0 (mod 2) exactly; X and Y are the
    halved positive/negative exponent products mod n, checked to square to
    the same residue before either gcd is taken.
    """
    candidates = [np.asarray(z, dtype=np.int64) for z in kernel]
    if combination_budget is not None and combination_budget > len(candidates):
        extra = combination_budget - len(candidates)
        for i in range(len(kernel)):
            for j in range(i + 1, len(kernel)):
                if extra <= 0:
                    break
                combined = (kernel[i].astype(np.int64) + kernel[j]) % 2
                candidates.append(combined)
                extra -= 1
            if extra <= 0:
                break

    primes = relation.base.primes
    factors: set[int] = set()
    for z in candidates:
        if not z.any():
            continue
        column_sum = relation.matrix @ z
        if (column_sum & 1).any():
            raise ArithmeticError("kernel vector does not zero the matrix mod 2")
        half = column_sum[:-1] // 2  # sign row participates in parity only
        x = 1
        y = 1
        for p, e in zip(primes, half):
            e = int(e)
            if e > 0:
                x = x * pow(p, e, n) % n
            elif e < 0:
                y = y * pow(p, -e, n) % n
        if (x * x - y * y) % n != 0:
            raise ArithmeticError("selected pairs do not form a congruence of squares")
        for g in (math.gcd((x + y) % n, n), math.gcd((x - y) % n, n)):
            if 1 < g < n:
                factors.add(g)
    return factors

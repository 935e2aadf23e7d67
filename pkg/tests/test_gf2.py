from __future__ import annotations

import itertools

import numpy as np
import pytest

from sqif.gf2 import (
    build_exponent_matrix,
    extract_factors,
    null_space_mod2,
)
from sqif.numtheory import factor_over_base, primes_up_to
from sqif.relations import SrPair, test_sr_pair as make_sr_pair


def _kernel_set_oracle(matrix: np.ndarray) -> set[tuple[int, ...]]:
    # every z in {0,1}^cols with M z = 0 (mod 2), by direct enumeration
    n_cols = matrix.shape[1]
    out = set()
    for z in itertools.product((0, 1), repeat=n_cols):
        if not ((matrix @ np.array(z)) % 2).any():
            out.add(z)
    return out


def _span(basis: list[np.ndarray], n_cols: int) -> set[tuple[int, ...]]:
    out = set()
    for picks in itertools.product((0, 1), repeat=len(basis)):
        z = np.zeros(n_cols, dtype=np.int64)
        for take, vec in zip(picks, basis):
            if take:
                z = (z + vec) % 2
        out.add(tuple(int(x) for x in z))
    return out


def test_null_space_matches_exhaustive_oracle() -> None:
    rng = np.random.default_rng(5)
    for _ in range(60):
        n_rows = int(rng.integers(1, 7))
        n_cols = int(rng.integers(1, 9))
        matrix = rng.integers(-3, 4, size=(n_rows, n_cols))
        basis = null_space_mod2(matrix)
        oracle = _kernel_set_oracle(matrix)
        assert _span(basis, n_cols) == oracle
        # rank-nullity: the kernel has exactly 2^(cols - rank) elements
        assert 1 << len(basis) == len(oracle)


def test_null_space_simple_cases() -> None:
    assert null_space_mod2(np.array([[2], [0], [1]])) == []
    basis = null_space_mod2(np.zeros((3, 4), dtype=np.int64))
    assert len(basis) == 4
    assert _span(basis, 4) == _kernel_set_oracle(np.zeros((3, 4), dtype=np.int64))
    single = null_space_mod2(np.array([[-2], [4]]))
    assert len(single) == 1
    assert list(single[0]) == [1]


def test_null_space_is_deterministic() -> None:
    rng = np.random.default_rng(11)
    matrix = rng.integers(0, 2, size=(5, 8))
    a = null_space_mod2(matrix)
    b = null_space_mod2(matrix)
    assert len(a) == len(b)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_null_space_validation() -> None:
    with pytest.raises(ValueError):
        null_space_mod2(np.array([1, 0, 1]))
    with pytest.raises(ValueError):
        null_space_mod2(np.zeros((3, 0), dtype=np.int64))


def test_build_exponent_matrix_layout() -> None:
    base = primes_up_to(8)
    a = make_sr_pair(81, 1, 77, base)  # residue +4
    b = make_sr_pair(45, 1, 77, base)  # residue -32
    rel = build_exponent_matrix([a, b], base)
    assert rel.matrix.shape == (5, 2)
    assert list(rel.matrix[:, 0]) == [-2, 4, 0, 0, 0]
    assert list(rel.matrix[:, 1]) == [-5, 2, 1, 0, 1]
    assert rel.pairs == (a, b)


def test_build_exponent_matrix_validation() -> None:
    base = primes_up_to(8)
    with pytest.raises(ValueError):
        build_exponent_matrix([], base)
    foreign = SrPair(4, 1, 1, (2, 0), (0, 0))
    with pytest.raises(ValueError):
        build_exponent_matrix([foreign], base)


def test_extract_factors_micro_example() -> None:
    # the single pair (81, 1) for n = 77 already factors it: 9^2 = 2^2 (mod 77)
    base = primes_up_to(8)
    pair = make_sr_pair(81, 1, 77, base)
    rel = build_exponent_matrix([pair], base)
    kernel = null_space_mod2(rel.matrix)
    assert len(kernel) == 1
    assert extract_factors(rel, kernel, 77) == {7, 11}


def test_extract_factors_multi_pair() -> None:
    # n = 143 keeps the factor base coprime to n, so every kernel vector
    # combines into a valid congruence of squares
    base = primes_up_to(8)
    pairs = []
    for u in range(1, 2000):
        if factor_over_base(u, base) is None:
            continue
        for v in (1, 2):
            pair = make_sr_pair(u, v, 143, base)
            if pair is not None:
                pairs.append(pair)
    assert len(pairs) >= 8
    rel = build_exponent_matrix(pairs, base)
    kernel = null_space_mod2(rel.matrix)
    assert kernel
    factors = extract_factors(rel, kernel, 143)
    assert factors == {11, 13}
    capped = extract_factors(rel, kernel, 143, combination_budget=len(kernel) + 5)
    assert factors <= capped
    assert capped <= {11, 13}


def test_extract_factors_rejects_non_kernel_vector() -> None:
    base = primes_up_to(8)
    pair = make_sr_pair(45, 1, 77, base)  # odd column mod 2
    rel = build_exponent_matrix([pair], base)
    with pytest.raises(ArithmeticError):
        extract_factors(rel, [np.array([1], dtype=np.uint8)], 77)


def test_extract_factors_skips_zero_vector() -> None:
    base = primes_up_to(8)
    pair = make_sr_pair(81, 1, 77, base)
    rel = build_exponent_matrix([pair], base)
    assert extract_factors(rel, [np.zeros(1, dtype=np.uint8)], 77) == set()

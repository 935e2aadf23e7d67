"""Smooth-relation pairs: cube states -> lattice coefficients -> (u, v).

A cube state x perturbs Babai's coefficient vector z by kappa along each set
bit; the resulting coefficients (over the *original* prime-lattice basis,
after applying the reduction's unimodular transform) are prime exponents.
Positive exponents multiply into u, negative ones into v, and the pair is
smooth-relation (SR) when u - v*N factors over the factor base.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .lattice import BabaiSolution
from .numtheory import FactorBase, factor_over_base

__all__ = [
    "PairLedger",
    "SrPair",
    "coeff_vector_to_uv",
    "default_smoothness_bound",
    "required_sr_pairs",
    "states_to_coeff_vectors",
    "test_sr_pair",
]


def default_smoothness_bound(m: int) -> int:
    """B2 = 2 m^2, the default residue smoothness bound for an m-dim cube."""
    if m < 2:
        raise ValueError("m must be >= 2")
    return 2 * m * m


def required_sr_pairs(m: int, smoothness_bound: int, slack: int) -> int:
    """Stop once the ledger holds smoothness_bound + slack distinct pairs."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if smoothness_bound < 2:
        raise ValueError("smoothness bound must be >= 2")
    if slack < 0:
        raise ValueError("slack must be >= 0")
    return smoothness_bound + slack


@dataclass(frozen=True)
class SrPair:
    """u = prod p^a over the first m primes, residue u - v*N smooth over base."""

    u: int
    v: int
    residual_sign: int
    u_exponents: tuple[int, ...]
    residual_exponents: tuple[int, ...]


def states_to_coeff_vectors(
    states: Sequence[str], babai: BabaiSolution
) -> np.ndarray:
    """Reduced-basis coefficients z + x * kappa for each bitstring x.

    Row i corresponds to states[i]; character j of a state toggles the j-th
    reduced column by its residual sign.
    """
    m = babai.coeffs.shape[0]
    out = np.empty((len(states), m), dtype=np.int64)
    kappa = babai.residual_signs.astype(np.int64)
    z = babai.coeffs
    for i, state in enumerate(states):
        if len(state) != m:
            raise ValueError(f"state {state!r} is not {m} bits")
        bits = np.frombuffer(state.encode("ascii"), dtype=np.uint8) - ord("0")
        if bits.max(initial=0) > 1:
            raise ValueError(f"state {state!r} has non-binary characters")
        out[i] = z + bits.astype(np.int64) * kappa
    return out


def coeff_vector_to_uv(
    coeffs: Sequence[int], prime_basis: Sequence[int]
) -> tuple[int, int]:
    """(u, v) from signed prime exponents: positives to u, negatives to v."""
    if len(coeffs) != len(prime_basis):
        raise ValueError("coefficient vector and prime basis lengths differ")
    u = 1
    v = 1
    for p, e in zip(prime_basis, coeffs):
        e = int(e)
        if e > 0:
            u *= p**e
        elif e < 0:
            v *= p ** (-e)
    return u, v


def test_sr_pair(u: int, v: int, n: int, base: FactorBase) -> SrPair | None:
    """Accept (u, v) iff u is base-smooth and u - v*n is a nonzero smooth residue."""
    if u < 1 or v < 1:
        raise ValueError("u and v must be positive")
    if n < 2:
        raise ValueError("n must be >= 2")
    d = u - v * n
    if d == 0:
        return None
    u_dec = factor_over_base(u, base)
    if u_dec is None:
        return None
    d_dec = factor_over_base(d, base)
    if d_dec is None:
        return None
    pair = SrPair(
        u=u,
        v=v,
        residual_sign=d_dec.sign,
        u_exponents=u_dec.exponents,
        residual_exponents=d_dec.exponents,
    )
    _assert_congruent(pair, n, base)
    return pair


def _assert_congruent(pair: SrPair, n: int, base: FactorBase) -> None:
    # u = sign * prod p^b (mod n) must hold for every accepted pair
    acc = pair.residual_sign % n
    for p, e in zip(base.primes, pair.residual_exponents):
        if e:
            acc = acc * pow(p, e, n) % n
    if pair.u % n != acc:
        raise AssertionError(
            f"accepted pair (u={pair.u}, v={pair.v}) violates u = d (mod n)"
        )


class PairLedger:
    """Insertion-ordered, (u, v)-deduplicated collection of SR pairs."""

    def __init__(self, required: int, pairs: Iterable[SrPair] = ()) -> None:
        if required < 1:
            raise ValueError("required must be >= 1")
        self.required = required
        self._pairs: dict[tuple[int, int], SrPair] = {}
        for pair in pairs:
            self.add(pair)

    def add(self, pair: SrPair) -> bool:
        """Insert the pair; False when (u, v) was already present."""
        key = (pair.u, pair.v)
        if key in self._pairs:
            return False
        self._pairs[key] = pair
        return True

    def __len__(self) -> int:
        return len(self._pairs)

    def __contains__(self, key: tuple[int, int]) -> bool:
        return key in self._pairs

    @property
    def complete(self) -> bool:
        return len(self._pairs) >= self.required

    def pairs(self) -> list[SrPair]:
        return list(self._pairs.values())

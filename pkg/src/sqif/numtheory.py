"""Prime generation and factor-base smoothness arithmetic.

Everything here runs on plain Python integers (arbitrary precision); numpy
never enters the smoothness path because u, v and the residues routinely
exceed 64 bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "FactorBase",
    "SmoothDecomposition",
    "factor_over_base",
    "first_primes",
    "primes_up_to",
]

# Caps keep a typo like --smoothness-bound 1e12 from allocating the universe.
_MAX_PRIME_COUNT = 10**6
_MAX_SIEVE_BOUND = 10**8


def _sieve(bound: int) -> list[int]:
    """All primes <= bound by a plain sieve of Eratosthenes."""
    if bound < 2:
        return []
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return [i for i, is_p in enumerate(flags) if is_p]


def first_primes(k: int) -> tuple[int, ...]:
    """The k smallest primes, ascending."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > _MAX_PRIME_COUNT:
        raise ValueError(f"k={k} exceeds the prime-count cap {_MAX_PRIME_COUNT}")
    if k < 6:
        return (2, 3, 5, 7, 11)[:k]
    # p_k < k(ln k + ln ln k) for k >= 6, so one sieve always suffices.
    bound = int(k * (math.log(k) + math.log(math.log(k)))) + 10
    primes = _sieve(bound)
    return tuple(primes[:k])


@dataclass(frozen=True)
class FactorBase:
    """Ascending primes p <= bound, the universe for smoothness tests."""

    primes: tuple[int, ...]
    bound: int

    def __len__(self) -> int:
        return len(self.primes)


def primes_up_to(bound: int) -> FactorBase:
    """Factor base of every prime <= bound."""
    if bound < 2:
        raise ValueError("smoothness bound must be >= 2")
    if bound > _MAX_SIEVE_BOUND:
        raise ValueError(f"bound={bound} exceeds the sieve cap {_MAX_SIEVE_BOUND}")
    return FactorBase(primes=tuple(_sieve(bound)), bound=bound)


@dataclass(frozen=True)
class SmoothDecomposition:
    """x = sign * prod(p_i ** exponents_i) over an implied factor base."""

    sign: int
    exponents: tuple[int, ...]

    def value(self, base: FactorBase) -> int:
        out = self.sign
        for p, e in zip(base.primes, self.exponents):
            if e:
                out *= p**e
        return out


def factor_over_base(x: int, base: FactorBase) -> SmoothDecomposition | None:
    """Full decomposition of x over base, or None when x is not smooth.

    x = 0 is rejected; x = +-1 decomposes with all-zero exponents.
    """
    if x == 0:
        raise ValueError("0 has no factorization over a prime base")
    sign = 1 if x > 0 else -1
    n = x if x > 0 else -x
    exponents = [0] * len(base.primes)
    for i, p in enumerate(base.primes):
        if n == 1:
            break
        if p > n:
            return None  # remaining cofactor has a smaller prime outside the base
        if n % p == 0:
            e = 1
            n //= p
            while n % p == 0:
                e += 1
                n //= p
            exponents[i] = e
    if n != 1:
        return None
    return SmoothDecomposition(sign=sign, exponents=tuple(exponents))

"""Cube-energy enumeration kernels (numba with a pure-numpy fallback).

Both backends compute, for every state value in a range of Gray-code slabs,
the Ising energy offset + sum_j h_j s_j + sum_{i<j} J_ij s_i s_j and return
(values, energies) arrays. Slabs are 2**SLAB_BITS states aligned on slab
boundaries; the Gray walk of one aligned slab visits exactly one aligned
block of state values, so slabs partition the cube.

The numba path does a full O(m^2) evaluation at each slab head and O(m)
single-flip updates inside the slab; drift over 2**SLAB_BITS accumulations
is ~1e-12 relative, far inside the 1e-6 exactness tolerance. Per-state
arithmetic never crosses slab boundaries, so results are independent of
thread count and of how callers chunk slabs. The numpy path evaluates each
state directly with dense products; it is also chunk-independent because
every energy is a pure per-row reduction.

Indexing: kernels work in LSB bit space (spin a <-> bit a of the value).
Callers that number variables MSB-first must reverse h and J before calling
(see ising.py).

Set SQIF_DISABLE_NUMBA=1 to force the numpy path; the flag is read once at
import. Both backends remain importable for benchmarking.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "HAVE_NUMBA",
    "SLAB_BITS",
    "active_backend",
    "slab_energies",
    "slab_energies_numpy",
]

SLAB_BITS = 12

_flag = os.environ.get("SQIF_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _flag in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by SQIF_DISABLE_NUMBA")
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def slab_energies_numpy(
    h: np.ndarray,
    j_sym: np.ndarray,
    offset: float,
    m: int,
    slab_lo: int,
    slab_hi: int,
    slab_bits: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Direct evaluation of every state in slabs [slab_lo, slab_hi)."""
    index = np.arange(slab_lo << slab_bits, slab_hi << slab_bits, dtype=np.int64)
    values = index ^ (index >> 1)
    bits = (values[:, None] >> np.arange(m, dtype=np.int64)[None, :]) & 1
    spins = 1.0 - 2.0 * bits
    energies = offset + spins @ h + 0.5 * np.einsum("ij,ij->i", spins @ j_sym, spins)
    return values, energies


if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _slab_energies_numba(h, j_sym, offset, m, slab_lo, slab_hi, slab_bits):
        slab_size = 1 << slab_bits
        n_slabs = slab_hi - slab_lo
        values = np.empty(n_slabs * slab_size, dtype=np.int64)
        energies = np.empty(n_slabs * slab_size, dtype=np.float64)
        for si in prange(n_slabs):
            base = si * slab_size
            head = (slab_lo + si) << slab_bits
            v = head ^ (head >> 1)
            spins = np.empty(m, dtype=np.float64)
            for a in range(m):
                spins[a] = -1.0 if (v >> a) & 1 else 1.0
            e = offset
            for a in range(m):
                e += h[a] * spins[a]
                acc = 0.0
                for c in range(m):
                    acc += j_sym[a, c] * spins[c]
                e += 0.5 * spins[a] * acc
            values[base] = v
            energies[base] = e
            for t in range(1, slab_size):
                # bit flipped between gray(head+t-1) and gray(head+t) is the
                # lowest set bit of t (head is slab-aligned, t < slab size)
                flip = 0
                tt = t
                while tt & 1 == 0:
                    flip += 1
                    tt >>= 1
                acc = h[flip]
                for c in range(m):
                    acc += j_sym[flip, c] * spins[c]
                e -= 2.0 * spins[flip] * acc
                spins[flip] = -spins[flip]
                v ^= 1 << flip
                values[base + t] = v
                energies[base + t] = e
        return values, energies

    def slab_energies(h, j_sym, offset, m, slab_lo, slab_hi, slab_bits):
        return _slab_energies_numba(
            np.ascontiguousarray(h, dtype=np.float64),
            np.ascontiguousarray(j_sym, dtype=np.float64),
            float(offset),
            m,
            slab_lo,
            slab_hi,
            slab_bits,
        )

else:
    slab_energies = slab_energies_numpy


def active_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"

"""Timing comparison of the cube-energy kernels: numba vs pure numpy.

Both backends enumerate every Ising energy over the 2^m cube in Gray-code
slabs. Run with SQIF_DISABLE_NUMBA=1 to check what the fallback costs on
its own; here both are imported directly so one process times the two.

Usage: python benchmarks/bench_energies.py [m ...]   (default m = 14 16 18 20)
"""

import sys
import time

import numpy as np

from sqif._energies import HAVE_NUMBA, SLAB_BITS, slab_energies_numpy

if HAVE_NUMBA:
    from sqif._energies import slab_energies as slab_energies_numba
else:
    slab_energies_numba = None
    print("numba unavailable (or disabled); timing the numpy path only\n")


def run(backend, h, j_sym, m, chunk_states=1 << 18):
    """Enumerate the full cube in chunks, returning (best energy, seconds)."""
    slab_bits = min(SLAB_BITS, m)
    total_slabs = 1 << (m - slab_bits)
    slabs_per_chunk = max(1, chunk_states >> slab_bits)
    best = np.inf
    start = time.perf_counter()
    for lo in range(0, total_slabs, slabs_per_chunk):
        hi = min(lo + slabs_per_chunk, total_slabs)
        _, energies = backend(h, j_sym, 0.0, m, lo, hi, slab_bits)
        best = min(best, float(energies.min()))
    return best, time.perf_counter() - start


def main():
    dims = [int(a) for a in sys.argv[1:]] or [14, 16, 18, 20]
    rng = np.random.default_rng(0)

    if slab_energies_numba is not None:
        # trigger JIT compilation outside the timed region
        warm = rng.normal(size=4)
        warm_j = np.zeros((4, 4))
        slab_energies_numba(warm, warm_j, 0.0, 4, 0, 1, 4)

    print(f"{'m':>4} {'states':>12} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for m in dims:
        h = rng.normal(size=m)
        j = np.triu(rng.normal(size=(m, m)), 1)
        j_sym = j + j.T
        best_np, t_np = run(slab_energies_numpy, h, j_sym, m)
        if slab_energies_numba is None:
            print(f"{m:>4} {1 << m:>12} {t_np:>10.3f} {'-':>10} {'-':>8}")
            continue
        best_nb, t_nb = run(slab_energies_numba, h, j_sym, m)
        if abs(best_np - best_nb) > 1e-9:
            raise SystemExit(
                f"backend disagreement at m={m}: {best_np} vs {best_nb}"
            )
        print(
            f"{m:>4} {1 << m:>12} {t_np:>10.3f} {t_nb:>10.3f} "
            f"{t_np / t_nb:>7.1f}x"
        )


if __name__ == "__main__":
    main()
